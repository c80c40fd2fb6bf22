//! Ring-isomorphism machinery: coordinate permutations as Hadamard
//! automorphisms, the exhaustive automorphism census, the flag-equivalence
//! decision procedure for profiles, and a brute-force graded-isomorphism
//! oracle for tiny instances.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::{CohomProfile, RingElement};
use crate::error::{Error, Result};
use crate::gf2::{hprod, Gf2Matrix, Gf2Vector};
use crate::hadamard::Subspace;

/// A permutation of `size` coordinate indices, stored as an image list.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(size: usize) -> Self {
        Permutation {
            images: (0..size).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidArgument(
                    "image list is not a bijection".into(),
                ));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Swap of two indices.
    pub fn transposition(size: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..size).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn image_of(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0usize; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Composition `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size());
        Permutation {
            images: (0..self.size())
                .map(|i| self.images[other.images[i]])
                .collect(),
        }
    }

    /// Coordinate relabeling: bit `i` of `x` moves to position `σ(i)`.
    pub fn apply(&self, x: &Gf2Vector) -> Result<Gf2Vector> {
        if x.len() != self.size() {
            return Err(Error::LengthMismatch {
                left: self.size(),
                right: x.len(),
            });
        }
        let mut out = Gf2Vector::zeros(x.len());
        for i in 0..x.len() {
            if x.get(i) {
                out.set(self.images[i], true);
            }
        }
        Ok(out)
    }

    pub fn apply_subspace(&self, s: &Subspace) -> Result<Subspace> {
        if s.ambient_len() != self.size() {
            return Err(Error::LengthMismatch {
                left: self.size(),
                right: s.ambient_len(),
            });
        }
        Ok(s.permuted(&self.images))
    }

    /// The corresponding permutation matrix `P` with `P x = apply(x)`.
    pub fn to_matrix(&self) -> Gf2Matrix {
        let n = self.size();
        let mut m = Gf2Matrix::zeros(n, n);
        for (i, &j) in self.images.iter().enumerate() {
            m.set(j, i, true);
        }
        m
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

/// Convenience wrapper matching the operation vocabulary.
pub fn apply_permutation(sigma: &Permutation, x: &Gf2Vector) -> Result<Gf2Vector> {
    sigma.apply(x)
}

/// All weight-2 vectors of the ambient space: a basis of `V_{2r}` together
/// with all pairwise sums of basis elements. This probe set is what the
/// multiplicativity test below is checked on.
fn weight_two_probes(ambient: usize) -> Vec<Gf2Vector> {
    let mut out = Vec::new();
    for i in 0..ambient {
        for j in i + 1..ambient {
            let mut v = Gf2Vector::zeros(ambient);
            v.set(i, true);
            v.set(j, true);
            out.push(v);
        }
    }
    out
}

/// True iff the invertible matrix maps the even-weight subspace onto itself
/// and is multiplicative for the Hadamard product on all probe pairs.
pub fn is_hadamard_automorphism(m: &Gf2Matrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    m.invert()?;
    let probes = weight_two_probes(m.cols());
    // Even-weight images on a spanning family; invertibility then forces the
    // image of the even subspace to be the whole even subspace.
    for p in &probes {
        if m.mul_vector(p).weight() % 2 != 0 {
            return Ok(false);
        }
    }
    for (i, x) in probes.iter().enumerate() {
        for y in probes.iter().skip(i + 1) {
            let lhs = m.mul_vector(&hprod(x, y)?);
            let rhs = hprod(&m.mul_vector(x), &m.mul_vector(y))?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

const WEYL_CENSUS_MAX_R: usize = 2;

/// Exhaustively scans all invertible `2r x 2r` matrices and returns the
/// Hadamard automorphisms. Feasible only for `r <= 2` (the `r = 2` scan
/// covers all 20160 invertible matrices).
pub fn weyl_census(r: usize) -> Result<Vec<Gf2Matrix>> {
    if r == 0 || r > WEYL_CENSUS_MAX_R {
        return Err(Error::BudgetExceeded {
            what: "weyl census r",
            requested: r,
            limit: WEYL_CENSUS_MAX_R,
        });
    }
    let n = 2 * r;
    let cells = n * n;
    let mut out = Vec::new();
    for code in 0u64..(1u64 << cells) {
        let mut m = Gf2Matrix::zeros(n, n);
        for bit in 0..cells {
            if (code >> bit) & 1 == 1 {
                m.set(bit / n, bit % n, true);
            }
        }
        if m.rank() < n {
            continue;
        }
        if is_hadamard_automorphism(&m)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// Outcome of the flag-equivalence decision.
#[derive(Debug, Clone)]
pub enum FlagOutcome {
    /// A verified witness permutation carrying each `V_i` onto its
    /// counterpart for `i < n - 1`.
    Equivalent(Permutation),
    /// No witness exists; `invariant_mismatch` names the short-circuiting
    /// invariant when one fired before the search.
    NotEquivalent { invariant_mismatch: Option<String> },
}

impl FlagOutcome {
    pub fn witness(&self) -> Option<&Permutation> {
        match self {
            FlagOutcome::Equivalent(p) => Some(p),
            FlagOutcome::NotEquivalent { .. } => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        self.witness().is_some()
    }
}

/// Per-coordinate invariant used to restrict the search: for each filtration
/// space, the dimension of its hyperplane `{v : v_c = 0}` plus the incidence
/// of the coordinate with minimal-weight members.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CoordinateFingerprint(Vec<(usize, usize, usize)>);

fn coordinate_fingerprints(p: &CohomProfile) -> Result<Vec<CoordinateFingerprint>> {
    let ambient = p.ambient_len();
    let relevant = p.n().saturating_sub(1);
    let mut per_coord = vec![Vec::new(); ambient];
    for space in &p.filtration()[..relevant] {
        let members = space.members()?;
        let min_weight = members
            .iter()
            .map(Gf2Vector::weight)
            .filter(|&w| w > 0)
            .min()
            .unwrap_or(0);
        for (c, slot) in per_coord.iter_mut().enumerate() {
            // dim{v in V : v_c = 0} is dim V - 1 when the coordinate is in
            // the support of the space, dim V otherwise.
            let zero_dim = if space.basis_rows().iter().any(|v| v.get(c)) {
                space.dim() - 1
            } else {
                space.dim()
            };
            let min_count = members
                .iter()
                .filter(|v| v.weight() == min_weight && v.get(c))
                .count();
            slot.push((zero_dim, min_weight, min_count));
        }
    }
    Ok(per_coord.into_iter().map(CoordinateFingerprint).collect())
}

/// Verifies that `sigma` carries every `V_i` of `p` onto the matching space
/// of `q` for `i < n - 1`.
pub fn verify_flag_witness(
    sigma: &Permutation,
    p: &CohomProfile,
    q: &CohomProfile,
) -> Result<bool> {
    if p.n() != q.n() || p.r() != q.r() {
        return Ok(false);
    }
    let relevant = p.n().saturating_sub(1);
    for i in 0..relevant {
        if sigma.apply_subspace(&p.filtration()[i])? != q.filtration()[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

struct FlagSearch<'a> {
    ambient: usize,
    source_spaces: &'a [Subspace],
    target_spaces: &'a [Subspace],
    candidates: Vec<Vec<usize>>,
}

impl FlagSearch<'_> {
    /// Depth-first search over image assignments in ascending coordinate
    /// order; candidate targets are tried in ascending index order, so the
    /// first witness found is the lexicographically least one.
    fn run(&self) -> Option<Vec<usize>> {
        let mut assignment = vec![usize::MAX; self.ambient];
        let mut used = vec![false; self.ambient];
        if self.extend(0, &mut assignment, &mut used) {
            Some(assignment)
        } else {
            None
        }
    }

    fn extend(&self, coord: usize, assignment: &mut [usize], used: &mut [bool]) -> bool {
        if coord == self.ambient {
            return true;
        }
        for &target in &self.candidates[coord] {
            if used[target] {
                continue;
            }
            assignment[coord] = target;
            used[target] = true;
            if self.consistent(coord, assignment) && self.extend(coord + 1, assignment, used) {
                return true;
            }
            used[target] = false;
            assignment[coord] = usize::MAX;
        }
        false
    }

    /// Partial-image pruning: for every source basis vector, the bit pattern
    /// already forced on assigned target coordinates must be completable to a
    /// member of the target space.
    fn consistent(&self, upto: usize, assignment: &[usize]) -> bool {
        let assigned = upto + 1;
        let mut mask = Gf2Vector::zeros(self.ambient);
        for &t in &assignment[..assigned] {
            mask.set(t, true);
        }
        for (space, target) in self.source_spaces.iter().zip(self.target_spaces) {
            for b in space.basis_rows() {
                let mut pattern = Gf2Vector::zeros(self.ambient);
                for (src, &tgt) in assignment[..assigned].iter().enumerate() {
                    if b.get(src) {
                        pattern.set(tgt, true);
                    }
                }
                // Solvable iff the pattern restricted to the assigned mask is
                // spanned by the target basis restricted the same way.
                let masked_basis: Vec<Gf2Vector> = target
                    .basis_rows()
                    .iter()
                    .map(|w| hprod(w, &mask).expect("equal ambient"))
                    .collect();
                let span = Gf2Matrix::from_rows(masked_basis);
                if !span.in_span(&pattern).expect("equal ambient") {
                    return false;
                }
            }
        }
        true
    }
}

/// Decides whether two valid profiles are carried onto each other by a
/// coordinate permutation, returning the lexicographically least witness.
pub fn flag_equivalent(p: &CohomProfile, q: &CohomProfile) -> Result<FlagOutcome> {
    if p.r() != q.r() {
        return Ok(FlagOutcome::NotEquivalent {
            invariant_mismatch: Some("fixed-point counts differ".into()),
        });
    }
    if p.n() != q.n() {
        return Ok(FlagOutcome::NotEquivalent {
            invariant_mismatch: Some("manifold dimensions differ".into()),
        });
    }
    if p.betti() != q.betti() {
        return Ok(FlagOutcome::NotEquivalent {
            invariant_mismatch: Some("Betti vectors differ".into()),
        });
    }
    let ambient = p.ambient_len();
    let relevant = p.n().saturating_sub(1);
    let source_spaces = &p.filtration()[..relevant];
    let target_spaces = &q.filtration()[..relevant];

    let fp_p = coordinate_fingerprints(p)?;
    let fp_q = coordinate_fingerprints(q)?;
    {
        let mut mp = fp_p.clone();
        let mut mq = fp_q.clone();
        mp.sort();
        mq.sort();
        if mp != mq {
            return Ok(FlagOutcome::NotEquivalent {
                invariant_mismatch: Some("coordinate invariants differ".into()),
            });
        }
    }
    let candidates: Vec<Vec<usize>> = (0..ambient)
        .map(|c| {
            (0..ambient)
                .filter(|&t| fp_q[t] == fp_p[c])
                .collect::<Vec<_>>()
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(FlagOutcome::NotEquivalent {
            invariant_mismatch: Some("coordinate invariants differ".into()),
        });
    }

    let search = FlagSearch {
        ambient,
        source_spaces,
        target_spaces,
        candidates,
    };
    match search.run() {
        Some(images) => {
            let sigma = Permutation::from_images(images)?;
            // Re-verify before returning.
            if !verify_flag_witness(&sigma, p, q)? {
                return Err(Error::InvalidArgument(
                    "search returned an unverifiable witness".into(),
                ));
            }
            Ok(FlagOutcome::Equivalent(sigma))
        }
        None => Ok(FlagOutcome::NotEquivalent {
            invariant_mismatch: None,
        }),
    }
}

/// Witness report in the JSON wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub equivalent: bool,
    pub permutation: Option<Vec<usize>>,
    pub invariant_mismatch: Option<String>,
}

impl WitnessDoc {
    pub fn from_outcome(outcome: &FlagOutcome) -> Self {
        match outcome {
            FlagOutcome::Equivalent(p) => WitnessDoc {
                equivalent: true,
                permutation: Some(p.images().to_vec()),
                invariant_mismatch: None,
            },
            FlagOutcome::NotEquivalent { invariant_mismatch } => WitnessDoc {
                equivalent: false,
                permutation: None,
                invariant_mismatch: invariant_mismatch.clone(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

/// A ring isomorphism of the analytic form: one coordinate permutation
/// applied in every degree. Construction verifies the flag condition and the
/// ring-map properties on basis elements.
#[derive(Clone)]
pub struct AnalyticIso {
    sigma: Permutation,
    source: Arc<CohomProfile>,
    target: Arc<CohomProfile>,
}

impl AnalyticIso {
    pub fn new(
        sigma: Permutation,
        source: Arc<CohomProfile>,
        target: Arc<CohomProfile>,
    ) -> Result<Self> {
        let relevant = source.n().saturating_sub(1);
        for i in 0..relevant {
            if sigma.apply_subspace(&source.filtration()[i])? != target.filtration()[i] {
                return Err(Error::FlagConditionFailed { index: i });
            }
        }
        let iso = AnalyticIso {
            sigma,
            source,
            target,
        };
        iso.check_ring_map_properties()?;
        Ok(iso)
    }

    /// Additive, multiplicative, graded, unital: all four checked on basis
    /// elements of every filtration space and the full ambient space.
    fn check_ring_map_properties(&self) -> Result<()> {
        let ambient = self.source.ambient_len();
        let ones = Gf2Vector::ones(ambient);
        if self.sigma.apply(&ones)? != ones {
            return Err(Error::InvalidArgument(
                "permutation does not fix the unit".into(),
            ));
        }
        let mut probe_vectors: Vec<Gf2Vector> = Vec::new();
        for space in self.source.filtration() {
            probe_vectors.extend(space.basis_rows().iter().cloned());
        }
        probe_vectors.extend((0..ambient).map(|i| Gf2Vector::unit(ambient, i)));
        for x in &probe_vectors {
            for y in &probe_vectors {
                let additive =
                    self.sigma.apply(&x.plus(y))? == self.sigma.apply(x)?.plus(&self.sigma.apply(y)?);
                let multiplicative = self.sigma.apply(&hprod(x, y)?)?
                    == hprod(&self.sigma.apply(x)?, &self.sigma.apply(y)?)?;
                if !additive || !multiplicative {
                    return Err(Error::InvalidArgument(
                        "permutation map failed a ring-map property".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn permutation(&self) -> &Permutation {
        &self.sigma
    }

    pub fn source(&self) -> &Arc<CohomProfile> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CohomProfile> {
        &self.target
    }

    /// Applies the map degreewise; grading is preserved by construction.
    pub fn apply(&self, a: &RingElement) -> Result<RingElement> {
        if a.profile().as_ref() != self.source.as_ref() {
            return Err(Error::ProfileMismatch);
        }
        a.validate()?;
        let terms: Vec<(usize, Gf2Vector)> = a
            .terms()
            .map(|(d, v)| Ok((d, self.sigma.apply(v)?)))
            .collect::<Result<_>>()?;
        RingElement::from_terms(Arc::clone(&self.target), terms)
    }
}

/// Builds the analytic isomorphism induced by `sigma` between two profiles.
pub fn analytic_iso(
    sigma: Permutation,
    p: Arc<CohomProfile>,
    q: Arc<CohomProfile>,
) -> Result<AnalyticIso> {
    AnalyticIso::new(sigma, p, q)
}

// ---------------------------------------------------------------------------
// Brute-force graded isomorphism oracle
// ---------------------------------------------------------------------------

/// A degreewise linear bijection between two graded rings, recorded on a
/// fixed basis of every degree up to a cap.
#[derive(Clone)]
pub struct GradedIso {
    pub degree_cap: usize,
    /// Per degree: the basis of the source piece and the image of each
    /// basis vector.
    pub maps: Vec<(Vec<Gf2Vector>, Vec<Gf2Vector>)>,
}

impl GradedIso {
    /// Image of `v` in degree `d`, by coordinates in the recorded basis.
    pub fn apply_at(&self, d: usize, v: &Gf2Vector) -> Option<Gf2Vector> {
        let (basis, images) = &self.maps[d];
        let coords = coordinates_in_basis(basis, v)?;
        let mut out = Gf2Vector::zeros(v.len());
        for (i, img) in images.iter().enumerate() {
            if coords[i] {
                out.xor_assign(img);
            }
        }
        Some(out)
    }

    /// True iff this map agrees with `sigma` applied degreewise on every
    /// covered degree.
    pub fn matches_permutation(&self, sigma: &Permutation) -> bool {
        self.maps.iter().all(|(basis, images)| {
            basis
                .iter()
                .zip(images)
                .all(|(b, img)| sigma.apply(b).map(|s| s == *img).unwrap_or(false))
        })
    }
}

fn coordinates_in_basis(basis: &[Gf2Vector], v: &Gf2Vector) -> Option<Vec<bool>> {
    // Solve sum c_i basis_i = v by elimination over an augmented system.
    let n = v.len();
    let k = basis.len();
    let mut rows: Vec<(Gf2Vector, Vec<bool>)> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut tag = vec![false; k];
            tag[i] = true;
            (b.clone(), tag)
        })
        .collect();
    let mut rem = v.clone();
    let mut rem_tag = vec![false; k];
    let mut used = vec![false; k];
    for col in 0..n {
        let Some(pi) = (0..k).find(|&i| !used[i] && rows[i].0.get(col)) else {
            continue;
        };
        used[pi] = true;
        let (pivot_vec, pivot_tag) = rows[pi].clone();
        for (i, (vec_i, tag_i)) in rows.iter_mut().enumerate() {
            if i != pi && !used[i] && vec_i.get(col) {
                vec_i.xor_assign(&pivot_vec);
                for (t, &pt) in tag_i.iter_mut().zip(&pivot_tag) {
                    *t ^= pt;
                }
            }
        }
        if rem.get(col) {
            rem.xor_assign(&pivot_vec);
            for (t, &pt) in rem_tag.iter_mut().zip(&pivot_tag) {
                *t ^= pt;
            }
        }
    }
    if rem.is_zero() {
        Some(rem_tag)
    } else {
        None
    }
}

const BRUTE_MAX_R: usize = 2;
const BRUTE_MAX_N: usize = 3;

/// Exhaustively enumerates degreewise linear bijections between the graded
/// pieces of `p` and `q` that respect multiplication up to `degree_cap` and
/// send the unit to the unit. Tiny instances only.
pub fn brute_graded_isos(
    p: &Arc<CohomProfile>,
    q: &Arc<CohomProfile>,
    degree_cap: usize,
) -> Result<Vec<GradedIso>> {
    if p.r() > BRUTE_MAX_R || q.r() > BRUTE_MAX_R {
        return Err(Error::BudgetExceeded {
            what: "brute graded iso r",
            requested: p.r().max(q.r()),
            limit: BRUTE_MAX_R,
        });
    }
    if p.n() > BRUTE_MAX_N || q.n() > BRUTE_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "brute graded iso n",
            requested: p.n().max(q.n()),
            limit: BRUTE_MAX_N,
        });
    }
    if degree_cap > 2 * BRUTE_MAX_N {
        return Err(Error::BudgetExceeded {
            what: "brute graded iso degree cap",
            requested: degree_cap,
            limit: 2 * BRUTE_MAX_N,
        });
    }
    if p.n() != q.n() || p.r() != q.r() {
        return Ok(Vec::new());
    }

    let source_bases: Vec<Vec<Gf2Vector>> = (0..=degree_cap)
        .map(|d| p.space_at(d).basis_rows().to_vec())
        .collect();
    let target_spaces: Vec<Subspace> = (0..=degree_cap).map(|d| q.space_at(d)).collect();

    // Degree 0 is forced: unit to unit.
    let ambient = p.ambient_len();
    let ones = Gf2Vector::ones(ambient);
    let mut found = Vec::new();
    let mut maps: Vec<Vec<Gf2Vector>> = vec![vec![ones.clone()]];
    debug_assert_eq!(source_bases[0], vec![ones.clone()]);

    extend_degree(
        1,
        degree_cap,
        &source_bases,
        &target_spaces,
        &mut maps,
        &mut found,
    );

    Ok(found
        .into_iter()
        .map(|images_per_degree: Vec<Vec<Gf2Vector>>| GradedIso {
            degree_cap,
            maps: source_bases
                .iter()
                .cloned()
                .zip(images_per_degree)
                .collect(),
        })
        .collect())
}

/// Image of `v` under the partial map recorded for degree `d`.
fn partial_image(basis: &[Gf2Vector], images: &[Gf2Vector], v: &Gf2Vector) -> Option<Gf2Vector> {
    let coords = coordinates_in_basis(basis, v)?;
    let mut out = Gf2Vector::zeros(v.len());
    for (i, img) in images.iter().enumerate() {
        if coords[i] {
            out.xor_assign(img);
        }
    }
    Some(out)
}

fn extend_degree(
    d: usize,
    cap: usize,
    source_bases: &[Vec<Gf2Vector>],
    target_spaces: &[Subspace],
    maps: &mut Vec<Vec<Gf2Vector>>,
    found: &mut Vec<Vec<Vec<Gf2Vector>>>,
) {
    if d > cap {
        found.push(maps.clone());
        return;
    }
    let basis = &source_bases[d];
    // Constraints forced by products of lower positive degrees.
    let mut forced_sources: Vec<Gf2Vector> = Vec::new();
    let mut forced_images: Vec<Gf2Vector> = Vec::new();
    for a in 1..d {
        let b = d - a;
        if b < a {
            break;
        }
        for (i, u) in source_bases[a].iter().enumerate() {
            for (j, v) in source_bases[b].iter().enumerate() {
                if a == b && j < i {
                    continue;
                }
                let prod = hprod(u, v).expect("equal ambient");
                let img = hprod(&maps[a][i], &maps[b][j]).expect("equal ambient");
                forced_sources.push(prod);
                forced_images.push(img);
            }
        }
    }
    // Consistency of the forced part: every linear relation among sources
    // must hold among images. Reduce incrementally, keeping an independent
    // subset.
    let mut indep_sources: Vec<Gf2Vector> = Vec::new();
    let mut indep_images: Vec<Gf2Vector> = Vec::new();
    for (s, im) in forced_sources.iter().zip(&forced_images) {
        match partial_image(&indep_sources, &indep_images, s) {
            Some(existing) => {
                if existing != *im {
                    return; // inconsistent with lower degrees
                }
            }
            None => {
                indep_sources.push(s.clone());
                indep_images.push(im.clone());
            }
        }
    }

    // Enumerate extensions of the forced partial map to a bijection of the
    // degree-d pieces.
    enumerate_extensions(
        d,
        cap,
        0,
        basis,
        &mut indep_sources,
        &mut indep_images,
        source_bases,
        target_spaces,
        maps,
        found,
    );
}

#[allow(clippy::too_many_arguments)]
fn enumerate_extensions(
    d: usize,
    cap: usize,
    next: usize,
    basis: &[Gf2Vector],
    partial_sources: &mut Vec<Gf2Vector>,
    partial_images: &mut Vec<Gf2Vector>,
    source_bases: &[Vec<Gf2Vector>],
    target_spaces: &[Subspace],
    maps: &mut Vec<Vec<Gf2Vector>>,
    found: &mut Vec<Vec<Vec<Gf2Vector>>>,
) {
    if next == basis.len() {
        // Fully determined on the degree-d basis; record images and check
        // bijectivity onto the target piece.
        let images: Vec<Gf2Vector> = basis
            .iter()
            .map(|b| partial_image(partial_sources, partial_images, b).expect("determined"))
            .collect();
        let target = &target_spaces[d];
        let span = Subspace::from_spanning(images[0].len(), images.iter().cloned());
        if span.dim() != basis.len() || span != *target {
            return;
        }
        maps.push(images);
        extend_degree(d + 1, cap, source_bases, target_spaces, maps, found);
        maps.pop();
        return;
    }
    let b = &basis[next];
    if partial_image(partial_sources, partial_images, b).is_some() {
        enumerate_extensions(
            d,
            cap,
            next + 1,
            basis,
            partial_sources,
            partial_images,
            source_bases,
            target_spaces,
            maps,
            found,
        );
        return;
    }
    // Free choice: any target-piece member keeping the partial map injective
    // works; bijectivity is re-checked at completion.
    let candidates = target_spaces[d]
        .members()
        .expect("tiny instance");
    for cand in candidates {
        if cand.is_zero() {
            continue;
        }
        partial_sources.push(b.clone());
        partial_images.push(cand);
        enumerate_extensions(
            d,
            cap,
            next + 1,
            basis,
            partial_sources,
            partial_images,
            source_bases,
            target_spaces,
            maps,
            found,
        );
        partial_sources.pop();
        partial_images.pop();
    }
}

/// All permutations of `0..size`, in lexicographic order. Test and census
/// helper; factorial growth.
pub fn all_permutations(size: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..size).collect();
    loop {
        out.push(Permutation {
            images: current.clone(),
        });
        // Next lexicographic permutation.
        let Some(i) = (0..size.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
        else {
            break;
        };
        let j = (i + 1..size).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{profile_from_code, standard_profile_n2};

    fn v(s: &str) -> Gf2Vector {
        Gf2Vector::parse(s).unwrap()
    }

    fn n3_profile(middle: &[&str], r: usize) -> Arc<CohomProfile> {
        let spans: Vec<Gf2Vector> = middle.iter().map(|s| v(s)).collect();
        Arc::new(profile_from_code(3, r, Subspace::span_of(&spans)).unwrap())
    }

    #[test]
    fn apply_examples() {
        let id = Permutation::identity(4);
        assert_eq!(id.apply(&v("1010")).unwrap(), v("1010"));
        let swap = Permutation::transposition(4, 0, 1);
        assert_eq!(swap.apply(&v("1000")).unwrap(), v("0100"));
        for sigma in all_permutations(4) {
            assert_eq!(sigma.apply(&Gf2Vector::ones(4)).unwrap(), Gf2Vector::ones(4));
        }
        assert!(id.apply(&v("10100")).is_err());
    }

    #[test]
    fn permutations_preserve_weight_and_product() {
        let sigma = Permutation::from_images(vec![2, 0, 3, 1, 5, 4]).unwrap();
        let x = v("110100");
        let y = v("011100");
        assert_eq!(sigma.apply(&x).unwrap().weight(), x.weight());
        assert_eq!(
            sigma.apply(&hprod(&x, &y).unwrap()).unwrap(),
            hprod(&sigma.apply(&x).unwrap(), &sigma.apply(&y).unwrap()).unwrap()
        );
    }

    #[test]
    fn automorphism_examples() {
        for sigma in all_permutations(4) {
            assert!(is_hadamard_automorphism(&sigma.to_matrix()).unwrap());
        }
        // Shear on (Z_2)^2: invertible but sends 11 to 10.
        let shear = Gf2Matrix::from_rows(vec![v("11"), v("01")]);
        assert!(!is_hadamard_automorphism(&shear).unwrap());
        let singular = Gf2Matrix::from_rows(vec![v("11"), v("11")]);
        assert!(matches!(
            is_hadamard_automorphism(&singular),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn automorphism_rejects_even_preserving_non_permutation() {
        // Find an invertible 4x4 matrix fixing the even subspace setwise that
        // is not a permutation matrix, and confirm multiplicativity fails.
        // One such: maps the even basis 1100,1010,1001 to 1100,0110,1001 and
        // the odd vector 1000 to itself.
        let m = {
            // Columns express images of the unit vectors, solved from the
            // basis action above.
            // e1=1000->1000; solve the rest from the even images.
            // 1100 -> 1100 means e2 -> 1100 + 1000 = 0100.
            // 1010 -> 0110 means e3 -> 0110 + 1000 = 1110.
            // 1001 -> 1001 means e4 -> 0001.
            Gf2Matrix::from_columns(&[v("1000"), v("0100"), v("1110"), v("0001")])
        };
        assert_eq!(m.rank(), 4);
        // Even-weight basis images stay even.
        for b in ["1100", "1010", "1001"] {
            assert_eq!(m.mul_vector(&v(b)).weight() % 2, 0);
        }
        assert!(!is_hadamard_automorphism(&m).unwrap());
    }

    #[test]
    fn weyl_census_r1() {
        let survivors = weyl_census(1).unwrap();
        assert_eq!(survivors.len(), 2);
        assert!(survivors.iter().all(Gf2Matrix::is_permutation_matrix));
        assert!(matches!(weyl_census(3), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn flag_equivalent_identity_witness() {
        let p = n3_profile(&["1111", "1100"], 2);
        let out = flag_equivalent(&p, &p).unwrap();
        let w = out.witness().expect("equivalent to itself");
        assert_eq!(w.images(), Permutation::identity(4).images());
    }

    #[test]
    fn flag_equivalent_n2_profiles() {
        let p = Arc::new(standard_profile_n2(3));
        let q = Arc::new(standard_profile_n2(3));
        assert!(flag_equivalent(&p, &q).unwrap().is_equivalent());
        let r = Arc::new(standard_profile_n2(2));
        let out = flag_equivalent(&p, &r).unwrap();
        match out {
            FlagOutcome::NotEquivalent { invariant_mismatch } => {
                assert_eq!(invariant_mismatch.as_deref(), Some("fixed-point counts differ"));
            }
            _ => panic!("profiles with different r must not be equivalent"),
        }
    }

    #[test]
    fn flag_equivalent_witness_matches_exhaustive_scan() {
        let p = n3_profile(&["1111", "1100"], 2);
        let q = n3_profile(&["1111", "1010"], 2);
        let out = flag_equivalent(&p, &q).unwrap();
        let w = out.witness().expect("swap witness exists");
        // Exhaustive oracle over all 4! permutations.
        let valid: Vec<Permutation> = all_permutations(4)
            .into_iter()
            .filter(|s| verify_flag_witness(s, &p, &q).unwrap())
            .collect();
        assert!(!valid.is_empty());
        assert!(valid.iter().any(|s| s.images() == w.images()));
        // The search is lexicographic, so the first valid image list wins.
        assert_eq!(w.images(), valid[0].images());
        // The witness is the coordinate swap (2 3) in 1-based terms.
        assert_eq!(w.images(), &[0, 2, 1, 3]);
    }

    #[test]
    fn flag_search_agrees_with_scan_on_inequivalent_pair() {
        // Two closed middle spaces for r = 3 that are genuinely inequivalent:
        // a decomposable one and another decomposable with different block
        // profile would be equivalent, so use the pair/partner structure vs a
        // rotated one that is equivalent; the scan is the referee either way.
        let p = n3_profile(&["110000", "001100", "000011"], 3);
        let q = n3_profile(&["101000", "010100", "000011"], 3);
        let out = flag_equivalent(&p, &q).unwrap();
        let scan_has_witness = all_permutations(6)
            .into_iter()
            .any(|s| verify_flag_witness(&s, &p, &q).unwrap());
        assert_eq!(out.is_equivalent(), scan_has_witness);
    }

    #[test]
    fn analytic_iso_examples() {
        let p = n3_profile(&["1111", "1100"], 2);
        let iso = analytic_iso(Permutation::identity(4), Arc::clone(&p), Arc::clone(&p)).unwrap();
        let a = RingElement::from_terms(
            Arc::clone(&p),
            [(1, v("1100")), (3, v("0100"))],
        )
        .unwrap();
        assert_eq!(iso.apply(&a).unwrap(), a);

        let q = n3_profile(&["1111", "1010"], 2);
        let sigma = Permutation::from_images(vec![0, 2, 1, 3]).unwrap();
        let iso = analytic_iso(sigma, Arc::clone(&p), Arc::clone(&q)).unwrap();
        let b = RingElement::monomial(Arc::clone(&p), 1, v("1100")).unwrap();
        assert_eq!(iso.apply(&b).unwrap().coefficient(1), v("1010"));

        // Wrong permutation fails the flag condition.
        let bad = Permutation::identity(4);
        assert!(matches!(
            analytic_iso(bad, Arc::clone(&p), Arc::clone(&q)),
            Err(Error::FlagConditionFailed { .. })
        ));
    }

    #[test]
    fn analytic_iso_preserves_index() {
        use crate::cohomology::equivariant_index;
        let p = n3_profile(&["1111", "1100"], 2);
        let q = n3_profile(&["1111", "1010"], 2);
        let sigma = Permutation::from_images(vec![0, 2, 1, 3]).unwrap();
        let iso = analytic_iso(sigma, Arc::clone(&p), Arc::clone(&q)).unwrap();
        let a = RingElement::from_terms(
            Arc::clone(&p),
            [(2, v("1100")), (4, v("1000")), (5, v("0110"))],
        )
        .unwrap();
        assert_eq!(
            equivariant_index(&a).unwrap(),
            equivariant_index(&iso.apply(&a).unwrap()).unwrap()
        );
    }

    #[test]
    fn brute_isos_smallest_case() {
        // n = 2, r = 1: the two coordinate permutations give exactly the two
        // graded isomorphisms (they differ from degree 2 on).
        let p = Arc::new(standard_profile_n2(1));
        let isos = brute_graded_isos(&p, &p, 4).unwrap();
        assert_eq!(isos.len(), 2);
        let perms = all_permutations(2);
        for iso in &isos {
            assert!(perms.iter().any(|s| iso.matches_permutation(s)));
        }
        assert!(isos
            .iter()
            .any(|iso| iso.matches_permutation(&Permutation::identity(2))));
    }

    #[test]
    fn brute_isos_are_permutation_induced() {
        let p = n3_profile(&["1111", "1100"], 2);
        let isos = brute_graded_isos(&p, &p, 6).unwrap();
        // Witness permutations: those preserving the middle space.
        let witnesses: Vec<Permutation> = all_permutations(4)
            .into_iter()
            .filter(|s| verify_flag_witness(s, &p, &p).unwrap())
            .collect();
        assert_eq!(witnesses.len(), 8);
        assert_eq!(isos.len(), witnesses.len());
        for iso in &isos {
            assert!(witnesses.iter().any(|s| iso.matches_permutation(s)));
        }
    }

    #[test]
    fn brute_isos_empty_for_inequivalent() {
        let p = Arc::new(standard_profile_n2(1));
        let q = Arc::new(standard_profile_n2(2));
        assert!(brute_graded_isos(&p, &q, 4).unwrap().is_empty());
        assert!(matches!(
            brute_graded_isos(&p, &q, 20),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
