//! Classification of isotropic column sets: the matrix family `M_r`,
//! standard forms `(I_r; P)` with `P` orthogonal, canonical forms under
//! coordinate permutation, double-coset enumeration, irreducibility, and the
//! generator families that realize irreducible classes.

mod canonical;

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::equivalence::Permutation;
use crate::error::{Error, Result};
use crate::gf2::{hprod, Gf2Matrix, Gf2Vector};
use crate::hadamard::Subspace;

pub use canonical::canonical_span;

/// Default cap for classification and orthogonal-group enumeration.
pub const DEFAULT_BUDGET: usize = 6;

/// Bumped whenever the canonical form or classification output changes;
/// part of the cache key.
pub const ALGORITHM_VERSION: u32 = 1;

/// A full-rank `2r x r` matrix over GF(2) whose columns have pairwise (and
/// self) even Hadamard overlap. Columns span a Hadamard-closed `r`-space of
/// the even-weight subspace.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicMatrix {
    r: usize,
    columns: Vec<Gf2Vector>,
}

impl IsotropicMatrix {
    /// Validates shape, rank, and isotropy.
    pub fn try_new(columns: Vec<Gf2Vector>) -> Result<Self> {
        let r = columns.len();
        if r == 0 {
            return Err(Error::WrongShape {
                expected: "2r x r with r >= 1".into(),
                got: "no columns".into(),
            });
        }
        let ambient = columns[0].len();
        if ambient != 2 * r || columns.iter().any(|c| c.len() != ambient) {
            return Err(Error::WrongShape {
                expected: format!("{} x {r}", 2 * r),
                got: format!("{ambient} x {r}"),
            });
        }
        let m = IsotropicMatrix { r, columns };
        if !m.is_isotropic() {
            return Err(Error::InvalidArgument(
                "columns are not a rank-r isotropic set".into(),
            ));
        }
        Ok(m)
    }

    fn is_isotropic(&self) -> bool {
        let mat = Gf2Matrix::from_rows(self.columns.clone());
        if mat.rank() != self.r {
            return false;
        }
        for (i, u) in self.columns.iter().enumerate() {
            for v in self.columns.iter().skip(i) {
                if u.overlap_parity(v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn from_matrix(m: &Gf2Matrix) -> Result<Self> {
        if m.cols() == 0 || m.rows() != 2 * m.cols() {
            return Err(Error::WrongShape {
                expected: "2r x r".into(),
                got: format!("{} x {}", m.rows(), m.cols()),
            });
        }
        Self::try_new(m.columns())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ambient_len(&self) -> usize {
        2 * self.r
    }

    pub fn columns(&self) -> &[Gf2Vector] {
        &self.columns
    }

    /// The `2r x r` matrix form (columns written as matrix columns).
    pub fn to_matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_columns(&self.columns)
    }

    /// The column span as a subspace of `(Z_2)^{2r}`.
    pub fn column_span(&self) -> Subspace {
        Subspace::from_spanning(2 * self.r, self.columns.iter().cloned())
    }

    /// Applies a row permutation and a right column transform; both moves
    /// preserve membership, which is re-checked on construction.
    pub fn transformed(&self, sigma: &Permutation, lambda: &Gf2Matrix) -> Result<IsotropicMatrix> {
        if sigma.size() != 2 * self.r {
            return Err(Error::LengthMismatch {
                left: 2 * self.r,
                right: sigma.size(),
            });
        }
        if lambda.rows() != self.r || lambda.cols() != self.r {
            return Err(Error::WrongShape {
                expected: format!("{0} x {0}", self.r),
                got: format!("{} x {}", lambda.rows(), lambda.cols()),
            });
        }
        lambda.invert()?;
        let permuted: Vec<Gf2Vector> = self
            .columns
            .iter()
            .map(|c| sigma.apply(c))
            .collect::<Result<_>>()?;
        let new_cols: Vec<Gf2Vector> = (0..self.r)
            .map(|j| {
                let mut acc = Gf2Vector::zeros(2 * self.r);
                for (k, col) in permuted.iter().enumerate() {
                    if lambda.get(k, j) {
                        acc.xor_assign(col);
                    }
                }
                acc
            })
            .collect();
        Self::try_new(new_cols)
    }
}

impl fmt::Debug for IsotropicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsotropicMatrix(r={})\n{}", self.r, self.to_matrix())
    }
}

/// Checks the defining conditions on an arbitrary matrix: shape `2r x r`,
/// rank `r`, all pairwise column products even.
pub fn is_isotropic_matrix(m: &Gf2Matrix) -> Result<bool> {
    if m.cols() == 0 || m.rows() != 2 * m.cols() {
        return Err(Error::WrongShape {
            expected: "2r x r".into(),
            got: format!("{} x {}", m.rows(), m.cols()),
        });
    }
    Ok(IsotropicMatrix::try_new(m.columns()).is_ok())
}

/// An `r x r` matrix with `P P^T = I` over GF(2); equivalently the columns
/// have odd self-weight and pairwise even overlap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthogonalMatrix {
    inner: Gf2Matrix,
}

impl OrthogonalMatrix {
    pub fn try_new(m: Gf2Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        if m.mul_matrix(&m.transpose()) != Gf2Matrix::identity(m.rows()) {
            return Err(Error::InvalidArgument("matrix is not orthogonal".into()));
        }
        Ok(OrthogonalMatrix { inner: m })
    }

    pub fn size(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.inner
    }

    /// The stacked member `(I_r; P)` of `M_r`.
    pub fn stacked(&self) -> IsotropicMatrix {
        let r = self.size();
        let cols: Vec<Gf2Vector> = (0..r)
            .map(|j| {
                let mut c = Gf2Vector::zeros(2 * r);
                c.set(j, true);
                for i in 0..r {
                    if self.inner.get(i, j) {
                        c.set(r + i, true);
                    }
                }
                c
            })
            .collect();
        IsotropicMatrix::try_new(cols).expect("(I;P) with orthogonal P is isotropic")
    }

    fn encode(&self) -> u64 {
        let r = self.size();
        debug_assert!(r <= 8);
        let mut code = 0u64;
        for i in 0..r {
            for j in 0..r {
                if self.inner.get(i, j) {
                    code |= 1 << (i * r + j);
                }
            }
        }
        code
    }

    fn decode(code: u64, r: usize) -> Self {
        let mut m = Gf2Matrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                if (code >> (i * r + j)) & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        OrthogonalMatrix { inner: m }
    }
}

impl fmt::Debug for OrthogonalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrthogonalMatrix\n{}", self.inner)
    }
}

/// Row-selects an invertible block and column-reduces: returns `(sigma,
/// lambda, P)` with `sigma A lambda = (I_r; P)` and `P` orthogonal.
pub fn standard_form(
    a: &IsotropicMatrix,
) -> Result<(Permutation, Gf2Matrix, OrthogonalMatrix)> {
    let r = a.r();
    let rows_as_vectors: Vec<Gf2Vector> = (0..2 * r)
        .map(|i| {
            let mut row = Gf2Vector::zeros(r);
            for (j, c) in a.columns().iter().enumerate() {
                if c.get(i) {
                    row.set(j, true);
                }
            }
            row
        })
        .collect();
    // Greedy independent row selection; rank r guarantees success.
    let mut selected: Vec<usize> = Vec::with_capacity(r);
    let mut echelon: Vec<Gf2Vector> = Vec::new();
    for (i, row) in rows_as_vectors.iter().enumerate() {
        let mut rem = row.clone();
        for e in &echelon {
            let pivot = e.support()[0];
            if rem.get(pivot) {
                rem.xor_assign(e);
            }
        }
        if !rem.is_zero() {
            echelon.push(rem);
            echelon.sort_by_key(|v| v.support()[0]);
            selected.push(i);
            if selected.len() == r {
                break;
            }
        }
    }
    debug_assert_eq!(selected.len(), r);
    let block = Gf2Matrix::from_rows(selected.iter().map(|&i| rows_as_vectors[i].clone()).collect());
    let lambda = block.invert()?;
    // Selected rows to the top (in order), the rest below in original order.
    let mut images = vec![usize::MAX; 2 * r];
    for (k, &i) in selected.iter().enumerate() {
        images[i] = k;
    }
    let mut next = r;
    for img in images.iter_mut() {
        if *img == usize::MAX {
            *img = next;
            next += 1;
        }
    }
    let sigma = Permutation::from_images(images)?;
    let transformed = a.transformed(&sigma, &lambda)?;
    let mut p = Gf2Matrix::zeros(r, r);
    for (j, c) in transformed.columns().iter().enumerate() {
        for i in 0..r {
            if c.get(r + i) {
                p.set(i, j, true);
            }
        }
        for i in 0..r {
            debug_assert_eq!(c.get(i), i == j, "top block must be the identity");
        }
    }
    let orthogonal = OrthogonalMatrix::try_new(p)?;
    Ok((sigma, lambda, orthogonal))
}

/// Span of all pairwise Hadamard products of the columns (the columns
/// themselves included via the diagonal).
pub fn product_span(a: &IsotropicMatrix) -> Subspace {
    let mut products = Vec::new();
    for (i, u) in a.columns().iter().enumerate() {
        for v in a.columns().iter().skip(i) {
            products.push(hprod(u, v).expect("equal ambient"));
        }
    }
    Subspace::from_spanning(2 * a.r(), products)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
        }
    }
}

/// One support-disjoint block of a decomposition, with the coordinates it
/// occupies in the ambient space.
#[derive(Debug, Clone)]
pub struct Block {
    pub coordinates: Vec<usize>,
    pub matrix: IsotropicMatrix,
}

/// Splits the column span into its finest support-disjoint direct sum:
/// coordinates are linked when they co-occur in the support of an RREF basis
/// vector, and each connected class carries a `2k x k` member.
pub fn decompose(a: &IsotropicMatrix) -> Vec<Block> {
    let span = a.column_span();
    let ambient = 2 * a.r();
    let mut uf = UnionFind::new(ambient);
    for row in span.basis_rows() {
        let support = row.support();
        for w in support.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..ambient {
        groups.entry(uf.find(c)).or_default().push(c);
    }
    let mut blocks = Vec::new();
    for (_, coords) in groups {
        let vectors: Vec<Gf2Vector> = span
            .basis_rows()
            .iter()
            .filter(|row| row.get(coords[0]) || coords.iter().any(|&c| row.get(c)))
            .map(|row| row.restrict(&coords))
            .collect();
        let matrix = IsotropicMatrix::try_new(vectors)
            .expect("support-disjoint blocks of an isotropic span are isotropic");
        blocks.push(Block {
            coordinates: coords,
            matrix,
        });
    }
    // Rank additivity cross-check: block dims sum to r and coordinate counts
    // are twice the block ranks.
    debug_assert_eq!(blocks.iter().map(|b| b.matrix.r()).sum::<usize>(), a.r());
    debug_assert!(blocks
        .iter()
        .all(|b| b.coordinates.len() == 2 * b.matrix.r()));
    blocks
}

/// Block-diagonal assembly of members into a larger member.
pub fn direct_sum(blocks: &[IsotropicMatrix]) -> Result<IsotropicMatrix> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("direct sum of no blocks".into()));
    }
    let total_r: usize = blocks.iter().map(IsotropicMatrix::r).sum();
    let ambient = 2 * total_r;
    let mut cols = Vec::with_capacity(total_r);
    let mut row_offset = 0usize;
    for b in blocks {
        for c in b.columns() {
            let mut col = Gf2Vector::zeros(ambient);
            for i in 0..c.len() {
                if c.get(i) {
                    col.set(row_offset + i, true);
                }
            }
            cols.push(col);
        }
        row_offset += 2 * b.r();
    }
    IsotropicMatrix::try_new(cols)
}

/// True iff the column span admits no support-disjoint direct-sum
/// decomposition. `dim X(A) = 2r - 1` is a sufficient fast path.
pub fn is_irreducible(a: &IsotropicMatrix) -> bool {
    if product_span(a).dim() == 2 * a.r() - 1 {
        return true;
    }
    decompose(a).len() == 1
}

// ---------------------------------------------------------------------------
// Generator families
// ---------------------------------------------------------------------------

/// The `(2l-1) x (l-1)` building-block matrix: a hub column of weight `l`,
/// remaining columns of weight 4 with all pairwise overlaps equal to 2.
pub fn family_a(l: usize) -> Result<Gf2Matrix> {
    if l < 4 {
        return Err(Error::InvalidArgument(format!(
            "family A needs l >= 4, got {l}"
        )));
    }
    let rows = 2 * l - 1;
    let cols = l - 1;
    let mut m = Gf2Matrix::zeros(rows, cols);
    m.set(0, 0, true);
    for j in 1..=l - 2 {
        m.set(j, 0, true);
        m.set(j, l - 1 - j, true);
    }
    for c in 0..cols {
        m.set(l - 1, c, true);
    }
    for c in 1..cols {
        m.set(l, c, true);
    }
    for j in 1..=l - 2 {
        m.set(l + j, j, true);
    }
    Ok(m)
}

/// The `2l x l` member built from `family_a(l)` plus an all-ones column;
/// irreducible for even `l >= 4`.
pub fn family_b(l: usize) -> Result<IsotropicMatrix> {
    if l < 4 || l % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "family B needs even l >= 4, got {l}"
        )));
    }
    let a = family_a(l)?;
    let rows = 2 * l;
    let mut cols: Vec<Gf2Vector> = (0..l - 1)
        .map(|j| {
            let mut c = Gf2Vector::zeros(rows);
            for i in 0..2 * l - 1 {
                if a.get(i, j) {
                    c.set(i, true);
                }
            }
            c
        })
        .collect();
    cols.push(Gf2Vector::ones(rows));
    IsotropicMatrix::try_new(cols)
}

/// The `2r x r` member with `r = s + t - 1` built from two `family_a` blocks
/// and an all-ones column; irreducible for even `s, t >= 4`.
pub fn family_c(s: usize, t: usize) -> Result<IsotropicMatrix> {
    for l in [s, t] {
        if l < 4 || l % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "family C needs even s, t >= 4, got ({s}, {t})"
            )));
        }
    }
    let r = s + t - 1;
    let rows = 2 * r;
    let a_s = family_a(s)?;
    let a_t = family_a(t)?;
    let mut cols = Vec::with_capacity(r);
    for j in 0..s - 1 {
        let mut c = Gf2Vector::zeros(rows);
        for i in 0..2 * s - 1 {
            if a_s.get(i, j) {
                c.set(i, true);
            }
        }
        cols.push(c);
    }
    for j in 0..t - 1 {
        let mut c = Gf2Vector::zeros(rows);
        for i in 0..2 * t - 1 {
            if a_t.get(i, j) {
                c.set(2 * s - 1 + i, true);
            }
        }
        cols.push(c);
    }
    cols.push(Gf2Vector::ones(rows));
    IsotropicMatrix::try_new(cols)
}

/// The reducible baseline `(I_r; I_r)`: r disjoint weight-2 columns.
pub fn stacked_identity(r: usize) -> Result<IsotropicMatrix> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let cols: Vec<Gf2Vector> = (0..r)
        .map(|j| {
            let mut c = Gf2Vector::zeros(2 * r);
            c.set(j, true);
            c.set(r + j, true);
            c
        })
        .collect();
    IsotropicMatrix::try_new(cols)
}

// ---------------------------------------------------------------------------
// Orthogonal group enumeration and double cosets
// ---------------------------------------------------------------------------

/// Every `P` with `P P^T = I`, exactly once, by column-by-column backtracking
/// over odd-weight columns with pairwise even overlap.
pub fn enumerate_orthogonal(r: usize) -> Result<Vec<OrthogonalMatrix>> {
    enumerate_orthogonal_with_budget(r, DEFAULT_BUDGET)
}

pub fn enumerate_orthogonal_with_budget(r: usize, budget: usize) -> Result<Vec<OrthogonalMatrix>> {
    if r == 0 || r > budget || r > 8 {
        return Err(Error::BudgetExceeded {
            what: "orthogonal group enumeration r",
            requested: r,
            limit: budget.min(8),
        });
    }
    let full = (1u32 << r) - 1;
    let mut out = Vec::new();
    let mut columns: Vec<u32> = Vec::with_capacity(r);
    fn extend(r: usize, full: u32, columns: &mut Vec<u32>, out: &mut Vec<OrthogonalMatrix>) {
        if columns.len() == r {
            let mut m = Gf2Matrix::zeros(r, r);
            for (j, &col) in columns.iter().enumerate() {
                for i in 0..r {
                    if (col >> i) & 1 == 1 {
                        m.set(i, j, true);
                    }
                }
            }
            out.push(OrthogonalMatrix { inner: m });
            return;
        }
        for cand in 1..=full {
            if cand.count_ones() % 2 == 0 {
                continue;
            }
            if columns.iter().any(|&c| (c & cand).count_ones() % 2 == 1) {
                continue;
            }
            columns.push(cand);
            extend(r, full, columns, out);
            columns.pop();
        }
    }
    extend(r, full, &mut columns, &mut out);
    Ok(out)
}

/// Orbit of `p` under simultaneous row and column permutations, as encodings.
fn double_coset_orbit(p: &OrthogonalMatrix) -> HashSet<u64> {
    let r = p.size();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let start = p.encode();
    seen.insert(start);
    queue.push_back(start);
    while let Some(code) = queue.pop_front() {
        let m = OrthogonalMatrix::decode(code, r);
        for k in 0..r - 1 {
            // Adjacent row swap.
            let mut rows = m.inner.clone();
            for j in 0..r {
                let (a, b) = (rows.get(k, j), rows.get(k + 1, j));
                rows.set(k, j, b);
                rows.set(k + 1, j, a);
            }
            // Adjacent column swap.
            let mut cols = m.inner.clone();
            for i in 0..r {
                let (a, b) = (cols.get(i, k), cols.get(i, k + 1));
                cols.set(i, k, b);
                cols.set(i, k + 1, a);
            }
            for next in [OrthogonalMatrix { inner: rows }, OrthogonalMatrix { inner: cols }] {
                let code = next.encode();
                if seen.insert(code) {
                    queue.push_back(code);
                }
            }
        }
    }
    seen
}

/// One representative per orbit of `S_r \ O(r) / S_r`, each the minimal
/// encoding of its orbit, in ascending order.
pub fn orthogonal_double_coset_reps(r: usize, budget: usize) -> Result<Vec<OrthogonalMatrix>> {
    let all = enumerate_orthogonal_with_budget(r, budget)?;
    let mut visited: HashSet<u64> = HashSet::new();
    let mut reps = Vec::new();
    for p in &all {
        if visited.contains(&p.encode()) {
            continue;
        }
        let orbit = double_coset_orbit(p);
        let min_code = orbit.iter().copied().min().expect("orbit is nonempty");
        visited.extend(orbit);
        reps.push(min_code);
    }
    reps.sort_unstable();
    Ok(reps
        .into_iter()
        .map(|code| OrthogonalMatrix::decode(code, r))
        .collect())
}

/// `|S_r \ O(r) / S_r|`, the upper bound for the classification count.
pub fn double_cosets_orthogonal(r: usize) -> Result<usize> {
    double_cosets_orthogonal_with_budget(r, DEFAULT_BUDGET)
}

pub fn double_cosets_orthogonal_with_budget(r: usize, budget: usize) -> Result<usize> {
    Ok(orthogonal_double_coset_reps(r, budget)?.len())
}

/// True iff the two matrices lie in the same `S_r \ O(r) / S_r` orbit.
pub fn same_orthogonal_double_coset(p: &OrthogonalMatrix, q: &OrthogonalMatrix) -> bool {
    if p.size() != q.size() {
        return false;
    }
    double_coset_orbit(p).contains(&q.encode())
}

// ---------------------------------------------------------------------------
// Canonical forms and classification
// ---------------------------------------------------------------------------

/// A representative of the column span's orbit under coordinate permutation:
/// the RREF basis of the canonically permuted span. Equal outputs iff the
/// inputs lie in the same orbit.
pub fn canonical_code(a: &IsotropicMatrix) -> Gf2Matrix {
    canonical::canonical_span(&a.column_span())
}

/// One orbit of the classification, with its canonical representative and
/// orbit-invariant fingerprint.
#[derive(Debug, Clone)]
pub struct OrbitClass {
    canonical: Gf2Matrix,
    representative: IsotropicMatrix,
    dim_x: usize,
    blocks: Vec<usize>,
    weight_distribution: Vec<usize>,
}

impl OrbitClass {
    fn from_canonical(canonical: Gf2Matrix) -> Self {
        let representative = IsotropicMatrix::try_new(canonical.row_vectors().to_vec())
            .expect("canonical basis spans an isotropic code");
        let dim_x = product_span(&representative).dim();
        let mut blocks: Vec<usize> = decompose(&representative)
            .iter()
            .map(|b| b.matrix.r())
            .collect();
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        let span = representative.column_span();
        let mut weight_distribution = vec![0usize; 2 * representative.r() + 1];
        for member in span.members().expect("desk-scale span") {
            weight_distribution[member.weight()] += 1;
        }
        OrbitClass {
            canonical,
            representative,
            dim_x,
            blocks,
            weight_distribution,
        }
    }

    pub fn canonical(&self) -> &Gf2Matrix {
        &self.canonical
    }

    pub fn representative(&self) -> &IsotropicMatrix {
        &self.representative
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    /// Dimensions of the irreducible blocks, descending.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn weight_distribution(&self) -> &[usize] {
        &self.weight_distribution
    }

    /// True iff `a` lies in this orbit.
    pub fn contains(&self, a: &IsotropicMatrix) -> bool {
        canonical_code(a) == self.canonical
    }
}

/// Complete duplicate-free orbit list for `M_r`: enumerates `O(r)` up to
/// double cosets, lifts each representative to `(I_r; P)`, and merges by
/// canonical code.
pub fn classify_isotropic(r: usize, budget: usize) -> Result<Vec<OrbitClass>> {
    if r == 0 || r > budget {
        return Err(Error::BudgetExceeded {
            what: "classification r",
            requested: r,
            limit: budget,
        });
    }
    let reps = orthogonal_double_coset_reps(r, budget.max(r))?;
    let mut classes: BTreeMap<Gf2Matrix, OrbitClass> = BTreeMap::new();
    for p in reps {
        let lifted = p.stacked();
        let canonical = canonical_code(&lifted);
        classes
            .entry(canonical.clone())
            .or_insert_with(|| OrbitClass::from_canonical(canonical));
    }
    Ok(classes.into_values().collect())
}

// ---------------------------------------------------------------------------
// JSON report and cache
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassDoc {
    pub canonical: Vec<String>,
    #[serde(rename = "dim_X")]
    pub dim_x: usize,
    pub blocks: Vec<usize>,
    pub weight_distribution: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationDoc {
    pub r: usize,
    pub count: usize,
    pub classes: Vec<ClassDoc>,
}

impl ClassificationDoc {
    pub fn from_classes(r: usize, classes: &[OrbitClass]) -> Self {
        ClassificationDoc {
            r,
            count: classes.len(),
            classes: classes
                .iter()
                .map(|c| ClassDoc {
                    canonical: c
                        .canonical()
                        .row_vectors()
                        .iter()
                        .map(|v| v.to_string())
                        .collect(),
                    dim_x: c.dim_x(),
                    blocks: c.blocks().to_vec(),
                    weight_distribution: c.weight_distribution().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// Classification serialized to canonical JSON bytes.
pub fn classification_json(r: usize, budget: usize) -> Result<String> {
    let classes = classify_isotropic(r, budget)?;
    Ok(ClassificationDoc::from_classes(r, &classes).to_json())
}

/// Cached variant: results live under
/// `<cache>/classify-v<ALGORITHM_VERSION>/r<r>.json`, written atomically;
/// a hit returns the stored bytes unchanged.
pub fn classification_json_cached(r: usize, budget: usize, cache_dir: &Path) -> Result<String> {
    let dir = cache_dir.join(format!("classify-v{ALGORITHM_VERSION}"));
    let path = dir.join(format!("r{r}.json"));
    if let Ok(bytes) = fs::read_to_string(&path) {
        return Ok(bytes);
    }
    let fresh = classification_json(r, budget)?;
    fs::create_dir_all(&dir)?;
    let tmp = dir.join(format!("r{r}.json.tmp-{}", std::process::id()));
    fs::write(&tmp, &fresh)?;
    fs::rename(&tmp, &path)?;
    Ok(fresh)
}
