//! The Hadamard ring structure on `(Z_2)^{2r}`: the even-weight subspace,
//! annihilator subspaces of the parity form, and closure tests under the
//! coordinatewise product.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{hprod, Gf2Matrix, Gf2Vector};

pub use crate::gf2::hprod as hadamard_product;

/// A linear subspace of `(Z_2)^n`, held as a row-reduced echelon basis.
///
/// Two subspaces are equal iff their reduced bases are identical, so
/// `PartialEq` on the stored basis is a complete equality test.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Gf2Matrix,
}

impl Subspace {
    /// The zero subspace of `(Z_2)^ambient`.
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Gf2Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_spanning(ambient, (0..ambient).map(|i| Gf2Vector::unit(ambient, i)))
    }

    /// Canonicalizes any spanning set to an RREF basis.
    pub fn from_spanning<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Gf2Vector>,
    {
        let rows: Vec<Gf2Vector> = vectors.into_iter().collect();
        for r in &rows {
            assert_eq!(r.len(), ambient, "spanning vector has wrong length");
        }
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        let (reduced, rank, _) = Gf2Matrix::from_rows(rows).rref();
        let basis = Gf2Matrix::from_rows(reduced.row_vectors()[..rank].to_vec());
        Subspace { ambient, basis }
    }

    pub fn span_of(vectors: &[Gf2Vector]) -> Self {
        assert!(!vectors.is_empty(), "span_of needs at least one vector");
        Self::from_spanning(vectors[0].len(), vectors.iter().cloned())
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Gf2Matrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> &[Gf2Vector] {
        self.basis.row_vectors()
    }

    pub fn contains(&self, x: &Gf2Vector) -> bool {
        if x.len() != self.ambient {
            return false;
        }
        if self.dim() == 0 {
            return x.is_zero();
        }
        // Basis is already reduced; eliminate against it directly.
        let mut rem = x.clone();
        for row in self.basis.row_vectors() {
            let pivot = row.support()[0];
            if rem.get(pivot) {
                rem.xor_assign(row);
            }
        }
        rem.is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|v| self.contains(v))
    }

    /// Sum of subspaces (span of the union).
    pub fn join(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Self::from_spanning(
            self.ambient,
            self.basis_rows()
                .iter()
                .chain(other.basis_rows())
                .cloned(),
        )
    }

    /// Intersection, computed from the dual description of `other`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // x = c^T B_self lies in `other` iff D (B_self^T c) = 0 where the
        // rows of D span the dual code of `other`.
        let dual = other.basis.kernel();
        if dual.rows() == 0 {
            return self.clone();
        }
        if self.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let constraint = dual.mul_matrix(&self.basis.transpose());
        let combos = constraint.kernel();
        let vectors = combos.row_vectors().iter().map(|c| {
            let mut acc = Gf2Vector::zeros(self.ambient);
            for (i, row) in self.basis.row_vectors().iter().enumerate() {
                if c.get(i) {
                    acc.xor_assign(row);
                }
            }
            acc
        });
        Self::from_spanning(self.ambient, vectors)
    }

    /// Iterates every member, zero included. Guarded: refuses dimensions
    /// above 24 (16M members).
    pub fn members(&self) -> Result<Vec<Gf2Vector>> {
        let k = self.dim();
        if k > 24 {
            return Err(Error::BudgetExceeded {
                what: "subspace enumeration dimension",
                requested: k,
                limit: 24,
            });
        }
        let mut out = Vec::with_capacity(1 << k);
        let mut current = Gf2Vector::zeros(self.ambient);
        out.push(current.clone());
        // Gray-code walk: flip one basis vector per step.
        for idx in 1u64..(1u64 << k) {
            let flip = idx.trailing_zeros() as usize;
            current.xor_assign(&self.basis.row_vectors()[flip]);
            out.push(current.clone());
        }
        Ok(out)
    }

    /// Basis rows rendered as '0'/'1' strings in lexicographic order; the
    /// canonical serialization used by the JSON formats.
    pub fn canonical_row_strings(&self) -> Vec<String> {
        let mut rows: Vec<String> = self.basis_rows().iter().map(|r| r.to_string()).collect();
        rows.sort();
        rows
    }

    /// Image under a coordinate relabeling given as an image list.
    pub(crate) fn permuted(&self, images: &[usize]) -> Subspace {
        assert_eq!(images.len(), self.ambient);
        let vectors = self.basis_rows().iter().map(|v| {
            let mut out = Gf2Vector::zeros(self.ambient);
            for i in 0..self.ambient {
                if v.get(i) {
                    out.set(images[i], true);
                }
            }
            out
        });
        Subspace::from_spanning(self.ambient, vectors)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in {}; rows {:?})",
            self.dim(),
            self.ambient,
            self.canonical_row_strings()
        )
    }
}

/// The even-weight subspace of `(Z_2)^{2r}`; dimension `2r - 1`.
pub fn even_subspace(r: usize) -> Subspace {
    assert!(r >= 1, "r must be positive");
    let ones = Gf2Matrix::from_rows(vec![Gf2Vector::ones(2 * r)]);
    Subspace {
        ambient: 2 * r,
        basis: normalize_kernel(ones.kernel()),
    }
}

fn normalize_kernel(k: Gf2Matrix) -> Gf2Matrix {
    if k.rows() == 0 {
        return k;
    }
    let (reduced, rank, _) = k.rref();
    Gf2Matrix::from_rows(reduced.row_vectors()[..rank].to_vec())
}

/// The annihilator `V(v) = {x even : |x ∘ v| even}`, computed as the kernel
/// of the two parity functionals (all-ones and `v`) rather than by
/// enumeration.
pub fn annihilator(v: &Gf2Vector) -> Subspace {
    let n = v.len();
    let rows = Gf2Matrix::from_rows(vec![Gf2Vector::ones(n), v.clone()]);
    Subspace {
        ambient: n,
        basis: normalize_kernel(rows.kernel()),
    }
}

/// Intersection of annihilators; the empty family yields the full
/// even-weight subspace.
pub fn annihilator_family(vs: &[Gf2Vector]) -> Result<Subspace> {
    let n = match vs.first() {
        Some(v) => v.len(),
        None => {
            return Err(Error::InvalidArgument(
                "annihilator_family of an empty list needs an ambient length; \
                 use even_subspace directly"
                    .into(),
            ))
        }
    };
    annihilator_family_in(n, vs)
}

/// Same as [`annihilator_family`] with an explicit ambient length, so the
/// empty-family convention `V() = V_{2r}` is expressible.
pub fn annihilator_family_in(ambient: usize, vs: &[Gf2Vector]) -> Result<Subspace> {
    let mut rows = vec![Gf2Vector::ones(ambient)];
    for v in vs {
        if v.len() != ambient {
            return Err(Error::LengthMismatch {
                left: ambient,
                right: v.len(),
            });
        }
        rows.push(v.clone());
    }
    let m = Gf2Matrix::from_rows(rows);
    Ok(Subspace {
        ambient,
        basis: normalize_kernel(m.kernel()),
    })
}

/// Splits `V(v)` as `V_1(v) ⊕ V_2(v)` with `V_1 = {x even : v∘x = x}`
/// (supported inside `v`) and `V_2 = {x even : v∘x = 0}` (supported outside).
pub fn split_annihilator(v: &Gf2Vector) -> Result<(Subspace, Subspace)> {
    if v.weight() % 2 != 0 {
        return Err(Error::OddWeight);
    }
    if v.is_zero() || v.weight() == v.len() {
        return Err(Error::DegenerateSplit);
    }
    let n = v.len();
    let inside = v.support();
    let outside: Vec<usize> = (0..n).filter(|&i| !v.get(i)).collect();
    let pair_basis = |coords: &[usize]| -> Subspace {
        let vectors = coords.windows(2).map(|w| {
            let mut x = Gf2Vector::zeros(n);
            x.set(w[0], true);
            x.set(w[1], true);
            x
        });
        Subspace::from_spanning(n, vectors)
    };
    Ok((pair_basis(&inside), pair_basis(&outside)))
}

/// Test oracle for the symmetric annihilator law
/// `V(u+v) = [V(u) ∩ V(v)] ∪ [V_{2r} \ (V(u) ∪ V(v))]`,
/// checked pointwise over the even-weight subspace.
pub fn symmetric_law_check(u: &Gf2Vector, v: &Gf2Vector) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    if u.len() % 2 != 0 || u.is_empty() {
        return Err(Error::InvalidArgument(
            "ambient length must be a positive even number".into(),
        ));
    }
    let even = even_subspace(u.len() / 2);
    let sum = u.plus(v);
    for x in even.members()? {
        let in_u = !hprod(&x, u)?.weight().is_multiple_of(2);
        let in_v = !hprod(&x, v)?.weight().is_multiple_of(2);
        let in_sum = hprod(&x, &sum)?.weight().is_multiple_of(2);
        let rhs = (!in_u && !in_v) || (in_u && in_v);
        if in_sum != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff all pairwise basis products of `W` have even weight. The check
/// on basis pairs suffices because the parity form is bilinear.
pub fn is_hadamard_closed(w: &Subspace) -> Result<bool> {
    for row in w.basis_rows() {
        if row.weight() % 2 != 0 {
            return Err(Error::NotEvenSubspace);
        }
    }
    let rows = w.basis_rows();
    for (i, u) in rows.iter().enumerate() {
        for v in rows.iter().skip(i) {
            if u.overlap_parity(v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Gf2Vector {
        Gf2Vector::parse(s).unwrap()
    }

    #[test]
    fn hprod_examples() {
        assert_eq!(hprod(&v("1010"), &v("0110")).unwrap(), v("0010"));
        let x = v("011010");
        assert_eq!(hprod(&x, &x).unwrap(), x);
        assert_eq!(hprod(&Gf2Vector::ones(6), &x).unwrap(), x);
        assert!(hprod(&v("10"), &v("100")).is_err());
    }

    #[test]
    fn even_subspace_examples() {
        let r1 = even_subspace(1);
        assert_eq!(r1.dim(), 1);
        assert!(r1.contains(&v("11")));

        let r2 = even_subspace(2);
        assert_eq!(r2.dim(), 3);
        assert!(r2.contains(&Gf2Vector::ones(4)));
        assert_eq!(
            r2,
            Subspace::span_of(&[v("1100"), v("1010"), v("1001")])
        );
        assert!(!r2.contains(&v("1110")));
    }

    /// Enumeration oracle: members of `V_{2r}` with even overlap on supp(v).
    fn annihilator_by_enumeration(vec: &Gf2Vector) -> Subspace {
        let r = vec.len() / 2;
        let members: Vec<Gf2Vector> = even_subspace(r)
            .members()
            .unwrap()
            .into_iter()
            .filter(|x| hprod(x, vec).unwrap().weight() % 2 == 0)
            .collect();
        Subspace::from_spanning(vec.len(), members)
    }

    #[test]
    fn annihilator_examples() {
        assert_eq!(annihilator(&v("0000")), even_subspace(2));
        assert_eq!(annihilator(&v("1111")), even_subspace(2));

        let a = annihilator(&v("1100"));
        assert_eq!(a.dim(), 2);
        assert_eq!(a, Subspace::span_of(&[v("1100"), v("0011")]));
        assert_eq!(a, annihilator_by_enumeration(&v("1100")));
    }

    #[test]
    fn annihilator_complement_law() {
        for s in ["110000", "101010", "111100"] {
            let w = v(s);
            assert_eq!(annihilator(&w), annihilator(&w.plus(&Gf2Vector::ones(6))));
        }
    }

    #[test]
    fn split_annihilator_examples() {
        let (v1, v2) = split_annihilator(&v("1100")).unwrap();
        assert_eq!(v1, Subspace::span_of(&[v("1100")]));
        assert_eq!(v2, Subspace::span_of(&[v("0011")]));

        let (v1, v2) = split_annihilator(&v("110000")).unwrap();
        assert_eq!((v1.dim(), v2.dim()), (1, 3));
        // Direct sum equals the annihilator.
        assert_eq!(v1.join(&v2), annihilator(&v("110000")));
        assert_eq!(v1.intersect(&v2).dim(), 0);

        assert!(matches!(
            split_annihilator(&v("0000")),
            Err(Error::DegenerateSplit)
        ));
        assert!(matches!(
            split_annihilator(&v("1111")),
            Err(Error::DegenerateSplit)
        ));
        assert!(matches!(split_annihilator(&v("1000")), Err(Error::OddWeight)));
    }

    #[test]
    fn split_parts_annihilate_each_other() {
        let (v1, v2) = split_annihilator(&v("111100")).unwrap();
        for a in v1.members().unwrap() {
            for b in v2.members().unwrap() {
                assert!(hprod(&a, &b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn annihilator_family_examples() {
        // k = 1 base case.
        assert_eq!(annihilator_family(&[v("1100")]).unwrap().dim(), 2);
        // Empty family convention.
        assert_eq!(annihilator_family_in(4, &[]).unwrap(), even_subspace(2));
        // r = 4 independent family of size 3.
        let fam = [v("11000000"), v("10100000"), v("10010000")];
        let f = annihilator_family(&fam).unwrap();
        assert_eq!(f.dim(), 4);
        // Enumeration oracle: intersect annihilators member by member.
        let by_members: Vec<Gf2Vector> = even_subspace(4)
            .members()
            .unwrap()
            .into_iter()
            .filter(|x| fam.iter().all(|w| hprod(x, w).unwrap().weight() % 2 == 0))
            .collect();
        assert_eq!(f, Subspace::from_spanning(8, by_members));
    }

    #[test]
    fn symmetric_law_examples() {
        let u = v("1100");
        assert!(symmetric_law_check(&u, &u).unwrap());
        assert!(symmetric_law_check(&u, &v("0110")).unwrap());
        assert!(symmetric_law_check(&v("101010"), &v("110100")).unwrap());
    }

    #[test]
    fn hadamard_closed_examples() {
        let ones = Subspace::span_of(&[Gf2Vector::ones(4)]);
        assert!(is_hadamard_closed(&ones).unwrap());

        let w = Subspace::span_of(&[v("1111"), v("1100")]);
        assert!(is_hadamard_closed(&w).unwrap());

        assert!(!is_hadamard_closed(&even_subspace(2)).unwrap());

        let odd = Subspace::span_of(&[v("1000")]);
        assert!(matches!(
            is_hadamard_closed(&odd),
            Err(Error::NotEvenSubspace)
        ));
    }

    #[test]
    fn closed_check_matches_exhaustive_products() {
        // Pairwise basis check must agree with the full member-by-member scan.
        for spans in [
            vec![v("111100"), v("001111")],
            vec![v("110000"), v("011000")],
            vec![v("110000"), v("001100"), v("000011")],
            vec![v("111111"), v("101101")],
        ] {
            let w = Subspace::span_of(&spans);
            let fast = is_hadamard_closed(&w).unwrap();
            let slow = {
                let members = w.members().unwrap();
                members.iter().all(|a| {
                    members
                        .iter()
                        .all(|b| hprod(a, b).unwrap().weight() % 2 == 0)
                })
            };
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn intersect_and_join() {
        let a = Subspace::span_of(&[v("1100"), v("0011")]);
        let b = Subspace::span_of(&[v("1010"), v("0101")]);
        let meet = a.intersect(&b);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&v("1111")));
        let join = a.join(&b);
        assert_eq!(join.dim(), 3);
    }

    #[test]
    fn canonical_rows_are_sorted() {
        let s = Subspace::span_of(&[v("0011"), v("1111")]);
        let rows = s.canonical_row_strings();
        let mut sorted = rows.clone();
        sorted.sort();
        assert_eq!(rows, sorted);
    }
}
