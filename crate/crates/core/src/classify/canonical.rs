//! Canonical form of a GF(2) code under coordinate permutation.
//!
//! Reducible codes are split into their support-disjoint components first;
//! each block is canonicalized on its own coordinates and the blocks are
//! reassembled in a fixed order, so only connected codes reach the search.
//!
//! For a connected code the canonical representative is the RREF basis
//! matrix minimizing the per-position key sequence over all coordinate
//! orderings. A position's key is the next RREF column (packed so a fresh
//! pivot always beats a dependent column), tie-broken by a coordinate color
//! from iterated partition refinement: per-coordinate weight enumerators
//! seed the colors, already-placed positions are individualized, and colors
//! propagate through the lightest codeword layers until stable. Every key
//! component is permutation-covariant, so equal outputs characterize equal
//! orbits exactly, and restricting the search to key-minimal candidates
//! never discards the true minimum.

use std::cmp::Ordering;

use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::hadamard::Subspace;

/// Per-position key: the RREF column with row 0 as the most significant
/// bit, then the candidate's refined color.
type LevelKey = (u64, u64);

/// Cap on the number of codewords admitted into the refinement layers.
const WORD_BUDGET: usize = 512;

struct Searcher {
    m: usize,
    k: usize,
    base_class: Vec<u64>,
    /// Refinement codewords as (weight, support coordinates), lightest
    /// weight layers first.
    words: Vec<(u8, Vec<usize>)>,
    /// Per coordinate: indices into `words` covering it.
    covering: Vec<Vec<usize>>,
    /// Generator rows of the code, kept for debug verification.
    generator_rows: Vec<u64>,
    best: Option<(Vec<LevelKey>, Vec<usize>)>,
    /// Code automorphisms discovered at leaves that tie with the incumbent;
    /// used to collapse candidate orbits at branch points.
    automorphisms: Vec<Vec<usize>>,
    nodes: u64,
    tie_events: Vec<u64>,
}

/// Cap on stored automorphisms; pruning stays sound when partial.
const AUTOMORPHISM_BUDGET: usize = 128;

#[derive(Clone)]
struct State {
    /// Rows already hosting a pivot, in pivot order, reduced so every chosen
    /// coordinate column has a single 1.
    pivot_rows: Vec<u64>,
    /// Rows with no pivot yet; zero on all chosen coordinates.
    free_rows: Vec<u64>,
    /// Original coordinate placed at each position.
    chosen: Vec<usize>,
    /// Mask of placed original coordinates.
    used: u64,
    /// Position of each placed coordinate.
    position: Vec<usize>,
}

impl State {
    fn new(rows: Vec<u64>, m: usize) -> Self {
        State {
            pivot_rows: Vec::new(),
            free_rows: rows,
            chosen: Vec::new(),
            used: 0,
            position: vec![usize::MAX; m],
        }
    }

    fn column_value(&self, c: usize, k: usize) -> u64 {
        if self.free_rows.iter().any(|&f| (f >> c) & 1 == 1) {
            let q = self.pivot_rows.len();
            1u64 << (k - 1 - q)
        } else {
            let mut val = 0u64;
            for (i, &p) in self.pivot_rows.iter().enumerate() {
                if (p >> c) & 1 == 1 {
                    val |= 1u64 << (k - 1 - i);
                }
            }
            val
        }
    }

    fn place(&self, c: usize) -> State {
        let mut next = self.clone();
        next.position[c] = next.chosen.len();
        next.chosen.push(c);
        next.used |= 1u64 << c;
        if let Some(idx) = next.free_rows.iter().position(|&f| (f >> c) & 1 == 1) {
            let pivot = next.free_rows.swap_remove(idx);
            for row in next.pivot_rows.iter_mut().chain(next.free_rows.iter_mut()) {
                if (*row >> c) & 1 == 1 {
                    *row ^= pivot;
                }
            }
            next.pivot_rows.push(pivot);
        }
        next
    }
}

impl Searcher {
    /// Iterated refinement of coordinate colors, conditioned on the chosen
    /// prefix: placed coordinates carry their position as a unique color,
    /// the rest start from their global class, and colors propagate through
    /// the refinement codewords until the partition stabilizes.
    fn stable_colors(&self, state: &State) -> Vec<u64> {
        let depth = state.chosen.len() as u64;
        let mut color: Vec<u64> = (0..self.m)
            .map(|c| {
                if state.position[c] != usize::MAX {
                    state.position[c] as u64
                } else {
                    depth + self.base_class[c]
                }
            })
            .collect();
        let mut word_sig: Vec<(u8, Vec<u64>)> = Vec::with_capacity(self.words.len());
        for _round in 0..self.m {
            word_sig.clear();
            for (w, support) in &self.words {
                let mut colors: Vec<u64> = support.iter().map(|&c| color[c]).collect();
                colors.sort_unstable();
                word_sig.push((*w, colors));
            }
            let mut signatures: Vec<(u64, Vec<&(u8, Vec<u64>)>)> = Vec::with_capacity(self.m);
            for c in 0..self.m {
                let mut neighborhood: Vec<&(u8, Vec<u64>)> =
                    self.covering[c].iter().map(|&idx| &word_sig[idx]).collect();
                neighborhood.sort_unstable();
                signatures.push((color[c], neighborhood));
            }
            let mut ranking: Vec<&(u64, Vec<&(u8, Vec<u64>)>)> = signatures.iter().collect();
            ranking.sort_unstable();
            ranking.dedup();
            let next: Vec<u64> = signatures
                .iter()
                .map(|sig| ranking.binary_search(&sig).expect("present") as u64)
                .collect();
            if next == color {
                break;
            }
            color = next;
        }
        color
    }

    fn dfs(&mut self, state: &State, keys: &mut Vec<LevelKey>) {
        self.nodes += 1;
        let depth = keys.len();
        if let Some((best_keys, _)) = &self.best {
            match keys.as_slice().cmp(&best_keys[..depth]) {
                Ordering::Greater => return,
                Ordering::Less | Ordering::Equal => {}
            }
        }
        if depth == self.m {
            match &self.best {
                None => self.best = Some((keys.clone(), state.chosen.clone())),
                Some((best_keys, best_ordering)) => {
                    if keys.as_slice() < best_keys.as_slice() {
                        self.best = Some((keys.clone(), state.chosen.clone()));
                    } else if keys.as_slice() == best_keys.as_slice()
                        && self.automorphisms.len() < AUTOMORPHISM_BUDGET
                    {
                        // Equal key sequences mean equal permuted codes, so
                        // the relabeling between the two orderings fixes the
                        // code: tau(best_ordering[j]) = chosen[j].
                        let mut tau = vec![usize::MAX; self.m];
                        for (j, &b) in best_ordering.iter().enumerate() {
                            tau[b] = state.chosen[j];
                        }
                        debug_assert!(self.fixes_code(&tau), "leaf tie must be an automorphism");
                        self.automorphisms.push(tau);
                    }
                }
            }
            return;
        }
        // Only key-minimal candidates can extend a minimal ordering.
        let colors = self.stable_colors(state);
        let mut ties: Vec<usize> = Vec::new();
        let mut best_key: Option<LevelKey> = None;
        for c in 0..self.m {
            if (state.used >> c) & 1 == 1 {
                continue;
            }
            let key = (state.column_value(c, self.k), colors[c]);
            match &best_key {
                None => {
                    best_key = Some(key);
                    ties.push(c);
                }
                Some(best) => match key.cmp(best) {
                    Ordering::Less => {
                        best_key = Some(key);
                        ties.clear();
                        ties.push(c);
                    }
                    Ordering::Equal => ties.push(c),
                    Ordering::Greater => {}
                },
            }
        }
        let key = best_key.expect("at least one unused coordinate");
        if ties.len() > 1 {
            ties = self.prune_by_automorphisms(state, ties);
            self.tie_events[depth] += ties.len() as u64;
        }
        for c in ties {
            let next = state.place(c);
            keys.push(key);
            self.dfs(&next, keys);
            keys.pop();
        }
    }

    /// Debug check: `tau` relabels the generator rows into the same row
    /// space.
    #[allow(dead_code)]
    fn fixes_code(&self, tau: &[usize]) -> bool {
        let relabel = |row: u64| -> u64 {
            let mut out = 0u64;
            let mut rem = row;
            while rem != 0 {
                let c = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                out |= 1u64 << tau[c];
            }
            out
        };
        let reduce = |mut rows: Vec<u64>| -> Vec<u64> {
            let mut rank = 0usize;
            for c in 0..self.m {
                let Some(idx) = (rank..rows.len()).find(|&i| (rows[i] >> c) & 1 == 1) else {
                    continue;
                };
                rows.swap(rank, idx);
                let pivot = rows[rank];
                for (i, row) in rows.iter_mut().enumerate() {
                    if i != rank && (*row >> c) & 1 == 1 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
            }
            rows.truncate(rank);
            rows
        };
        let original = reduce(self.generator_rows.clone());
        let mapped = reduce(self.generator_rows.iter().map(|&r| relabel(r)).collect());
        original == mapped
    }

    /// Keeps one representative per orbit of the tie candidates under the
    /// discovered automorphisms that fix the chosen prefix pointwise.
    /// Subtrees of orbit-mates are isomorphic, so dropping them never loses
    /// the minimum.
    fn prune_by_automorphisms(&self, state: &State, ties: Vec<usize>) -> Vec<usize> {
        let stabilizing: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|tau| state.chosen.iter().all(|&c| tau[c] == c))
            .collect();
        if stabilizing.is_empty() {
            return ties;
        }
        let in_ties: u64 = ties.iter().fold(0u64, |acc, &c| acc | (1u64 << c));
        let mut seen = 0u64;
        let mut keep = Vec::with_capacity(ties.len());
        for &c in &ties {
            if (seen >> c) & 1 == 1 {
                continue;
            }
            keep.push(c);
            // Orbit closure of c under the stabilizing generators.
            let mut stack = vec![c];
            seen |= 1u64 << c;
            while let Some(x) = stack.pop() {
                for tau in &stabilizing {
                    let y = tau[x];
                    if (in_ties >> y) & 1 == 1 && (seen >> y) & 1 == 0 {
                        seen |= 1u64 << y;
                        stack.push(y);
                    }
                }
            }
        }
        keep
    }
}

fn row_mask(v: &Gf2Vector) -> u64 {
    let mut mask = 0u64;
    for i in v.support() {
        mask |= 1u64 << i;
    }
    mask
}

fn support_list(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rem = mask;
    while rem != 0 {
        out.push(rem.trailing_zeros() as usize);
        rem &= rem - 1;
    }
    out
}

/// Canonical form of a connected code via the key-minimal ordering search.
fn canonical_connected(code: &Subspace) -> Gf2Matrix {
    let m = code.ambient_len();
    let k = code.dim();
    assert!(m <= 64, "canonical form supports ambient length up to 64");
    assert!(k >= 1 && k <= 20, "canonical form supports dimension 1..=20");
    let rows: Vec<u64> = code.basis_rows().iter().map(row_mask).collect();

    // One pass over all codewords: group them by weight and record the full
    // per-coordinate weight enumerator.
    let mut by_weight: Vec<Vec<u64>> = vec![Vec::new(); m + 1];
    let mut enumerator: Vec<Vec<usize>> = vec![vec![0usize; m + 1]; m];
    {
        let mut current = 0u64;
        for idx in 1u64..(1u64 << k) {
            current ^= rows[idx.trailing_zeros() as usize];
            let w = current.count_ones() as usize;
            by_weight[w].push(current);
            for c in support_list(current) {
                enumerator[c][w] += 1;
            }
        }
    }
    // Refinement layers: lightest weights first, admitted while the budget
    // holds (the lightest nonempty layer always enters).
    let mut words: Vec<(u8, Vec<usize>)> = Vec::new();
    for (w, layer) in by_weight.iter().enumerate() {
        if layer.is_empty() {
            continue;
        }
        if !words.is_empty() && words.len() + layer.len() > WORD_BUDGET {
            break;
        }
        let mut layer = layer.clone();
        layer.sort_unstable();
        for mask in layer {
            words.push((w as u8, support_list(mask)));
        }
    }
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (idx, (_, support)) in words.iter().enumerate() {
        for &c in support {
            covering[c].push(idx);
        }
    }

    let fingerprints: Vec<Vec<usize>> = (0..m).map(|c| enumerator[c].clone()).collect();
    let classes: Vec<&Vec<usize>> = {
        let mut sorted: Vec<&Vec<usize>> = fingerprints.iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
    };
    let base_class: Vec<u64> = fingerprints
        .iter()
        .map(|fp| classes.binary_search(&fp).expect("present") as u64)
        .collect();

    let mut searcher = Searcher {
        m,
        k,
        base_class,
        words,
        covering,
        generator_rows: rows.clone(),
        best: None,
        automorphisms: Vec::new(),
        nodes: 0,
        tie_events: vec![0; m + 1],
    };
    let start = State::new(rows, m);
    let mut keys = Vec::with_capacity(m);
    searcher.dfs(&start, &mut keys);
    if std::env::var("HADRING_CANON_STATS").is_ok() {
        eprintln!(
            "canonical search: m={m} k={k} nodes={} ties={:?}",
            searcher.nodes, searcher.tie_events
        );
    }
    let (_, ordering) = searcher.best.expect("search always completes");

    // Rebuild: permute the basis columns into canonical order and reduce.
    let permuted: Vec<Gf2Vector> = code
        .basis_rows()
        .iter()
        .map(|v| {
            let mut out = Gf2Vector::zeros(m);
            for (pos, &orig) in ordering.iter().enumerate() {
                if v.get(orig) {
                    out.set(pos, true);
                }
            }
            out
        })
        .collect();
    let (reduced, rank, _) = Gf2Matrix::from_rows(permuted).rref();
    debug_assert_eq!(rank, k);
    Gf2Matrix::from_rows(reduced.row_vectors()[..rank].to_vec())
}

/// Support-disjoint components of the code: coordinate sets together with
/// the block codes they carry. Coordinates outside every basis support form
/// one trailing zero block.
fn components(code: &Subspace) -> Vec<(Vec<usize>, Subspace)> {
    let m = code.ambient_len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for row in code.basis_rows() {
        let support = row.support();
        for w in support.windows(2) {
            let (ra, rb) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if ra != rb {
                parent[rb] = ra;
            }
        }
    }
    let mut covered = vec![false; m];
    for row in code.basis_rows() {
        for c in row.support() {
            covered[c] = true;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    let mut zero_block: Vec<usize> = Vec::new();
    for c in 0..m {
        if covered[c] {
            groups.entry(find(&mut parent, c)).or_default().push(c);
        } else {
            zero_block.push(c);
        }
    }
    let mut out = Vec::new();
    for (_, coords) in groups {
        let rows: Vec<Gf2Vector> = code
            .basis_rows()
            .iter()
            .filter(|row| row.get(coords[0]) || coords.iter().any(|&c| row.get(c)))
            .map(|row| row.restrict(&coords))
            .collect();
        let block = Subspace::from_spanning(coords.len(), rows);
        out.push((coords, block));
    }
    if !zero_block.is_empty() {
        let len = zero_block.len();
        out.push((zero_block, Subspace::zero(len)));
    }
    out
}

/// Canonical RREF basis of the code's orbit under coordinate permutation.
/// Two codes get equal outputs iff some permutation carries one onto the
/// other.
pub fn canonical_span(code: &Subspace) -> Gf2Matrix {
    let m = code.ambient_len();
    let comps = components(code);
    if comps.len() == 1 {
        return canonical_connected(code);
    }
    // Canonicalize blockwise, order blocks deterministically, reassemble.
    let mut blocks: Vec<Gf2Matrix> = comps
        .into_iter()
        .map(|(coords, block)| {
            if block.dim() == 0 {
                Gf2Matrix::zeros(0, coords.len())
            } else {
                canonical_connected(&block)
            }
        })
        .collect();
    blocks.sort();
    let mut rows: Vec<Gf2Vector> = Vec::with_capacity(code.dim());
    let mut offset = 0usize;
    for block in &blocks {
        for row in block.row_vectors() {
            let mut out = Gf2Vector::zeros(m);
            for c in row.support() {
                out.set(offset + c, true);
            }
            rows.push(out);
        }
        offset += block.cols();
    }
    debug_assert_eq!(offset, m);
    if rows.is_empty() {
        return Gf2Matrix::zeros(0, m);
    }
    // Blockwise RREF rows stacked by offset are already reduced; reduce once
    // more to normalize pivot order.
    let (reduced, rank, _) = Gf2Matrix::from_rows(rows).rref();
    debug_assert_eq!(rank, code.dim());
    Gf2Matrix::from_rows(reduced.row_vectors()[..rank].to_vec())
}
