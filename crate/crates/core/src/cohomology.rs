//! Graded ring profiles over `(Z_2)^{2r}[t]`: validated filtrations, element
//! arithmetic, per-degree dimension counts, and the equivariant index.
//!
//! A profile `(n, r, betti, V_0 ⊆ ... ⊆ V_{n-1})` stands for the graded ring
//! `V_0 + V_1 t + ... + V_{n-1} t^{n-1} + (Z_2)^{2r}(t^n + ...)` whose
//! multiplication is degreewise `(u t^a)(v t^b) = (u ∘ v) t^{a+b}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{hprod, Gf2Vector};
use crate::hadamard::{even_subspace, is_hadamard_closed, Subspace};

/// One named violation of the profile invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProfileViolation {
    /// `b_0` or `b_n` is not 1.
    BettiEndpoints,
    /// `b_i != b_{n-i}` for some i.
    BettiSymmetry { index: usize },
    /// The Betti numbers do not sum to `2r`.
    BettiSum { sum: usize },
    /// The Betti list does not have `n + 1` entries.
    BettiLength { len: usize },
    /// The filtration does not have `n` spaces.
    FiltrationLength { len: usize },
    /// Some `V_i` lives in the wrong ambient space.
    AmbientMismatch { index: usize },
    /// `dim V_i` differs from the Betti prefix sum.
    FiltrationDimension { index: usize, dim: usize, expected: usize },
    /// `V_i` is not contained in `V_{i+1}`.
    ChainInclusion { index: usize },
    /// `V_0` is not the span of the all-ones vector.
    BottomNotAllOnes,
    /// `V_{n-1}` is not the even-weight subspace.
    TopNotEvenSubspace,
    /// Some `V_i` contains an odd-weight vector.
    NotEven { index: usize },
    /// `V_i ∘ V_j` escapes `V_{i+j}` for some `i + j <= n - 1`.
    ClosureViolation { i: usize, j: usize },
}

impl fmt::Display for ProfileViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BettiEndpoints => write!(f, "betti endpoints: b_0 and b_n must both be 1"),
            Self::BettiSymmetry { index } => {
                write!(f, "betti symmetry: b_{index} != b_(n-{index})")
            }
            Self::BettiSum { sum } => write!(f, "betti sum: sum of betti is {sum}, expected 2r"),
            Self::BettiLength { len } => write!(f, "betti length: got {len}, expected n+1"),
            Self::FiltrationLength { len } => {
                write!(f, "filtration length: got {len}, expected n")
            }
            Self::AmbientMismatch { index } => {
                write!(f, "ambient mismatch: V_{index} does not live in (Z_2)^2r")
            }
            Self::FiltrationDimension { index, dim, expected } => write!(
                f,
                "filtration dimension: dim V_{index} = {dim}, expected betti prefix {expected}"
            ),
            Self::ChainInclusion { index } => {
                write!(f, "chain inclusion: V_{index} is not contained in V_{}", index + 1)
            }
            Self::BottomNotAllOnes => write!(f, "bottom space: V_0 must be span of all-ones"),
            Self::TopNotEvenSubspace => {
                write!(f, "top space: V_(n-1) must equal the even-weight subspace")
            }
            Self::NotEven { index } => {
                write!(f, "evenness: V_{index} contains an odd-weight vector")
            }
            Self::ClosureViolation { i, j } => {
                write!(f, "closure: V_{i} ∘ V_{j} is not contained in V_{}", i + j)
            }
        }
    }
}

/// Checks every profile invariant and reports each violated clause.
pub fn validate_profile(
    n: usize,
    r: usize,
    betti: &[usize],
    filtration: &[Subspace],
) -> Vec<ProfileViolation> {
    let mut out = Vec::new();
    if n < 1 || r < 1 {
        out.push(ProfileViolation::BettiSum { sum: 0 });
        return out;
    }
    if betti.len() != n + 1 {
        out.push(ProfileViolation::BettiLength { len: betti.len() });
        return out;
    }
    if filtration.len() != n {
        out.push(ProfileViolation::FiltrationLength {
            len: filtration.len(),
        });
        return out;
    }
    if betti[0] != 1 || betti[n] != 1 {
        out.push(ProfileViolation::BettiEndpoints);
    }
    for i in 0..=n {
        if betti[i] != betti[n - i] {
            out.push(ProfileViolation::BettiSymmetry { index: i });
            break;
        }
    }
    let sum: usize = betti.iter().sum();
    if sum != 2 * r {
        out.push(ProfileViolation::BettiSum { sum });
    }
    let ambient = 2 * r;
    for (i, v) in filtration.iter().enumerate() {
        if v.ambient_len() != ambient {
            out.push(ProfileViolation::AmbientMismatch { index: i });
            return out;
        }
    }
    let mut prefix = 0usize;
    for (i, v) in filtration.iter().enumerate() {
        prefix += betti[i];
        if v.dim() != prefix {
            out.push(ProfileViolation::FiltrationDimension {
                index: i,
                dim: v.dim(),
                expected: prefix,
            });
        }
    }
    for i in 0..n - 1 {
        if !filtration[i + 1].contains_subspace(&filtration[i]) {
            out.push(ProfileViolation::ChainInclusion { index: i });
        }
    }
    let ones = Subspace::span_of(&[Gf2Vector::ones(ambient)]);
    if filtration[0] != ones {
        out.push(ProfileViolation::BottomNotAllOnes);
    }
    if filtration[n - 1] != even_subspace(r) {
        out.push(ProfileViolation::TopNotEvenSubspace);
    }
    for (i, v) in filtration.iter().enumerate() {
        if v.basis_rows().iter().any(|row| row.weight() % 2 != 0) {
            out.push(ProfileViolation::NotEven { index: i });
        }
    }
    // Condition on products, checked pairwise on basis elements; products of
    // more factors follow by induction on the factor count.
    for i in 0..n {
        for j in i..n {
            if i + j > n - 1 {
                break;
            }
            let target = &filtration[i + j];
            'pairs: for u in filtration[i].basis_rows() {
                for v in filtration[j].basis_rows() {
                    let p = hprod(u, v).expect("equal ambient");
                    if !target.contains(&p) {
                        out.push(ProfileViolation::ClosureViolation { i, j });
                        break 'pairs;
                    }
                }
            }
        }
    }
    out
}

/// A validated filtration profile `(n, r, betti, V_0 ⊆ ... ⊆ V_{n-1})`.
#[derive(Clone, PartialEq, Eq)]
pub struct CohomProfile {
    n: usize,
    r: usize,
    betti: Vec<usize>,
    filtration: Vec<Subspace>,
}

impl CohomProfile {
    /// Validates all invariants; the error message lists every violated
    /// clause by name.
    pub fn new(
        n: usize,
        r: usize,
        betti: Vec<usize>,
        filtration: Vec<Subspace>,
    ) -> Result<Self> {
        let violations = validate_profile(n, r, &betti, &filtration);
        if violations.is_empty() {
            Ok(CohomProfile {
                n,
                r,
                betti,
                filtration,
            })
        } else {
            let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            Err(Error::InvalidProfile(list.join("; ")))
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ambient_len(&self) -> usize {
        2 * self.r
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    pub fn filtration(&self) -> &[Subspace] {
        &self.filtration
    }

    /// The coefficient space of degree `d`: `V_d` below the top degree, the
    /// full ambient space from degree `n` on.
    pub fn space_at(&self, d: usize) -> Subspace {
        if d < self.n {
            self.filtration[d].clone()
        } else {
            Subspace::full(2 * self.r)
        }
    }

    /// Dimension of the degree-`d` graded piece.
    pub fn ring_dimension(&self, d: usize) -> usize {
        if d < self.n {
            self.betti[..=d].iter().sum()
        } else {
            2 * self.r
        }
    }

    /// Per-degree dimensions for degrees `0..=max_degree`.
    pub fn ring_dimensions(&self, max_degree: usize) -> Vec<usize> {
        (0..=max_degree).map(|d| self.ring_dimension(d)).collect()
    }

    /// The largest filtration space closed under the Hadamard product,
    /// reported as (index, dimension). When consecutive spaces coincide the
    /// first index carrying that space is returned.
    pub fn largest_closed_index(&self) -> (usize, usize) {
        let mut best = 0usize;
        for i in (0..self.n).rev() {
            if is_hadamard_closed(&self.filtration[i]).unwrap_or(false) {
                best = i;
                break;
            }
        }
        while best > 0 && self.filtration[best - 1] == self.filtration[best] {
            best -= 1;
        }
        (best, self.filtration[best].dim())
    }

    /// Identity element: the all-ones vector in degree 0.
    pub fn one(self: &Arc<Self>) -> RingElement {
        RingElement::monomial(Arc::clone(self), 0, Gf2Vector::ones(2 * self.r))
            .expect("all-ones is a valid degree-0 coefficient")
    }
}

impl fmt::Debug for CohomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CohomProfile(n={}, r={}, betti={:?})",
            self.n, self.r, self.betti
        )
    }
}

/// The forced profile for `n = 2`: filtration `(span{1}, V_{2r})`.
pub fn standard_profile_n2(r: usize) -> CohomProfile {
    assert!(r >= 1);
    let ambient = 2 * r;
    let betti = vec![1, 2 * r - 2, 1];
    let filtration = vec![
        Subspace::span_of(&[Gf2Vector::ones(ambient)]),
        even_subspace(r),
    ];
    CohomProfile::new(2, r, betti, filtration).expect("forced n=2 profile is valid")
}

/// Builds the `n = 3` profile determined by a middle space: a Hadamard-closed
/// subspace of dimension `r` containing all-ones inside the even-weight
/// subspace.
pub fn profile_from_code(n: usize, r: usize, middle: Subspace) -> Result<CohomProfile> {
    if n != 3 {
        return Err(Error::InvalidArgument(format!(
            "profile_from_code supports n = 3 only, got n = {n}"
        )));
    }
    let ambient = 2 * r;
    if middle.ambient_len() != ambient {
        return Err(Error::LengthMismatch {
            left: ambient,
            right: middle.ambient_len(),
        });
    }
    if middle.dim() != r {
        return Err(Error::InvalidArgument(format!(
            "middle space must have dimension r = {r}, got {}",
            middle.dim()
        )));
    }
    if !middle.contains(&Gf2Vector::ones(ambient)) {
        return Err(Error::InvalidArgument(
            "middle space must contain the all-ones vector".into(),
        ));
    }
    if !even_subspace(r).contains_subspace(&middle) {
        return Err(Error::NotEvenSubspace);
    }
    if !is_hadamard_closed(&middle)? {
        return Err(Error::InvalidArgument(
            "middle space is not closed under the Hadamard product".into(),
        ));
    }
    let betti = vec![1, r - 1, r - 1, 1];
    let filtration = vec![
        Subspace::span_of(&[Gf2Vector::ones(ambient)]),
        middle,
        even_subspace(r),
    ];
    CohomProfile::new(3, r, betti, filtration)
}

/// An element of the graded ring: a finitely supported map from degree to a
/// coefficient vector of length `2r`.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElement {
    profile: Arc<CohomProfile>,
    terms: BTreeMap<usize, Gf2Vector>,
}

impl RingElement {
    pub fn zero(profile: Arc<CohomProfile>) -> Self {
        RingElement {
            profile,
            terms: BTreeMap::new(),
        }
    }

    /// Single term `v t^degree`; validates the coefficient against the
    /// filtration.
    pub fn monomial(profile: Arc<CohomProfile>, degree: usize, v: Gf2Vector) -> Result<Self> {
        let mut terms = BTreeMap::new();
        if !v.is_zero() {
            terms.insert(degree, v);
        }
        let elem = RingElement { profile, terms };
        elem.validate()?;
        Ok(elem)
    }

    pub fn from_terms<I>(profile: Arc<CohomProfile>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Gf2Vector)>,
    {
        let mut elem = RingElement::zero(profile);
        for (d, v) in terms {
            elem.add_term(d, &v);
        }
        elem.validate()?;
        Ok(elem)
    }

    /// Builds without validating; lets tests exercise the "not in ring
    /// image" error paths of `multiply` and `equivariant_index`.
    pub fn from_terms_unchecked<I>(profile: Arc<CohomProfile>, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, Gf2Vector)>,
    {
        let mut elem = RingElement::zero(profile);
        for (d, v) in terms {
            elem.add_term(d, &v);
        }
        elem
    }

    fn add_term(&mut self, degree: usize, v: &Gf2Vector) {
        assert_eq!(v.len(), self.profile.ambient_len());
        use std::collections::btree_map::Entry;
        match self.terms.entry(degree) {
            Entry::Vacant(e) => {
                if !v.is_zero() {
                    e.insert(v.clone());
                }
            }
            Entry::Occupied(mut e) => {
                e.get_mut().xor_assign(v);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn profile(&self) -> &Arc<CohomProfile> {
        &self.profile
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Gf2Vector)> {
        self.terms.iter().map(|(&d, v)| (d, v))
    }

    pub fn coefficient(&self, degree: usize) -> Gf2Vector {
        self.terms
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| Gf2Vector::zeros(self.profile.ambient_len()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks every degree-`d < n` coefficient against `V_d`.
    pub fn validate(&self) -> Result<()> {
        for (&d, v) in &self.terms {
            if d < self.profile.n() && !self.profile.filtration()[d].contains(v) {
                return Err(Error::NotInRingImage { degree: d });
            }
        }
        Ok(())
    }

    pub fn plus(&self, other: &RingElement) -> Result<RingElement> {
        if self.profile != other.profile {
            return Err(Error::ProfileMismatch);
        }
        let mut out = self.clone();
        for (&d, v) in &other.terms {
            out.add_term(d, v);
        }
        Ok(out)
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, v)| format!("{v}·t^{d}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Distributive bilinear extension of `(u t^a)(v t^b) = (u ∘ v) t^{a+b}`.
pub fn multiply(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    if a.profile != b.profile {
        return Err(Error::ProfileMismatch);
    }
    a.validate()?;
    b.validate()?;
    let mut out = RingElement::zero(Arc::clone(&a.profile));
    for (&da, va) in &a.terms {
        for (&db, vb) in &b.terms {
            let p = hprod(va, vb).expect("equal ambient");
            out.add_term(da + db, &p);
        }
    }
    debug_assert!(out.validate().is_ok(), "closure guarantees validity");
    Ok(out)
}

/// A polynomial in `Z_2[t]`, the value space of the equivariant index.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct IndexPolynomial {
    degrees: std::collections::BTreeSet<usize>,
}

impl IndexPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_degrees<I: IntoIterator<Item = usize>>(degrees: I) -> Self {
        let mut p = Self::zero();
        for d in degrees {
            p.toggle(d);
        }
        p
    }

    fn toggle(&mut self, degree: usize) {
        if !self.degrees.insert(degree) {
            self.degrees.remove(&degree);
        }
    }

    pub fn coefficient(&self, degree: usize) -> bool {
        self.degrees.contains(&degree)
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        self.degrees.iter().copied().collect()
    }
}

impl fmt::Display for IndexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degrees.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .degrees
            .iter()
            .map(|d| match d {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for IndexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexPolynomial({self})")
    }
}

/// The equivariant index: each homogeneous part `v t^d` contributes
/// `(|v| mod 2) t^{d-n}`. Valid elements never produce negative degrees,
/// because low-degree coefficients have even weight.
pub fn equivariant_index(a: &RingElement) -> Result<IndexPolynomial> {
    a.validate()?;
    let n = a.profile.n();
    let mut out = IndexPolynomial::zero();
    for (&d, v) in &a.terms {
        if v.weight() % 2 == 1 {
            debug_assert!(d >= n, "validated low degrees are even-weight");
            out.toggle(d - n);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSON document format
// ---------------------------------------------------------------------------

/// On-disk JSON form of a profile. Each `V_i` may be given by any spanning
/// set; loading canonicalizes. Writing emits RREF rows in lexicographic
/// order, so output is bit-exact canonical.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub n: usize,
    pub r: usize,
    pub betti: Vec<usize>,
    pub filtration: Vec<Vec<String>>,
}

impl ProfileDoc {
    pub fn from_profile(p: &CohomProfile) -> Self {
        ProfileDoc {
            n: p.n(),
            r: p.r(),
            betti: p.betti().to_vec(),
            filtration: p
                .filtration()
                .iter()
                .map(Subspace::canonical_row_strings)
                .collect(),
        }
    }

    pub fn into_profile(self) -> Result<CohomProfile> {
        let ambient = 2 * self.r;
        let mut filtration = Vec::with_capacity(self.filtration.len());
        for rows in &self.filtration {
            let mut vectors = Vec::with_capacity(rows.len());
            for row in rows {
                let v = Gf2Vector::parse(row)?;
                if v.len() != ambient {
                    return Err(Error::LengthMismatch {
                        left: ambient,
                        right: v.len(),
                    });
                }
                vectors.push(v);
            }
            filtration.push(Subspace::from_spanning(ambient, vectors));
        }
        CohomProfile::new(self.n, self.r, self.betti, filtration)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
