//! Property tests for the algebraic laws: packed linear algebra, the
//! annihilator dimension laws, ring arithmetic, and the permutation action.

use std::sync::Arc;

use proptest::collection::vec;
use proptest::prelude::*;

use hadring::{
    annihilator, annihilator_family_in, even_subspace, flag_equivalent, hprod,
    is_hadamard_closed, multiply, profile_from_code, split_annihilator, standard_profile_n2,
    CohomProfile, Gf2Matrix, Gf2Vector, Permutation, RingElement, Subspace,
};

fn bits(len: usize) -> impl Strategy<Value = Gf2Vector> {
    vec(any::<bool>(), len).prop_map(|bs| Gf2Vector::from_bools(&bs))
}

fn even_bits(r: usize) -> impl Strategy<Value = Gf2Vector> {
    bits(2 * r).prop_map(move |mut v| {
        if v.weight() % 2 == 1 {
            v.set(0, !v.get(0));
        }
        v
    })
}

fn permutation(size: usize) -> impl Strategy<Value = Permutation> {
    Just(()).prop_perturb(move |_, mut rng| {
        let mut images: Vec<usize> = (0..size).collect();
        for i in (1..size).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            images.swap(i, j);
        }
        Permutation::from_images(images).unwrap()
    })
}

proptest! {
    #[test]
    fn weight_identity(x in bits(24), y in bits(24)) {
        let p = hprod(&x, &y).unwrap();
        prop_assert_eq!(
            x.plus(&y).weight() + 2 * p.weight(),
            x.weight() + y.weight()
        );
    }

    #[test]
    fn rref_is_idempotent_and_rank_stable(rows in vec(bits(12), 1..7)) {
        let m = Gf2Matrix::from_rows(rows);
        let (reduced, rank, pivots) = m.rref();
        let (again, rank2, pivots2) = reduced.rref();
        prop_assert_eq!(&again, &reduced);
        prop_assert_eq!(rank, rank2);
        prop_assert_eq!(&pivots, &pivots2);
        // Row spaces agree.
        for row in reduced.row_vectors() {
            prop_assert!(m.in_span(row).unwrap());
        }
        for row in m.row_vectors() {
            prop_assert!(reduced.in_span(row).unwrap());
        }
    }

    #[test]
    fn inverse_multiplies_to_identity(rows in vec(bits(6), 6)) {
        let m = Gf2Matrix::from_rows(rows);
        prop_assume!(m.rank() == 6);
        let inv = m.invert().unwrap();
        prop_assert_eq!(inv.mul_matrix(&m), Gf2Matrix::identity(6));
    }

    #[test]
    fn annihilator_dimension_law(v in even_bits(5)) {
        prop_assume!(!v.is_zero() && v.weight() != 10);
        prop_assert_eq!(annihilator(&v).dim(), 8);
        // Complements share the annihilator.
        prop_assert_eq!(annihilator(&v), annihilator(&v.plus(&Gf2Vector::ones(10))));
    }

    #[test]
    fn split_dimensions_law(v in even_bits(5)) {
        prop_assume!(!v.is_zero() && v.weight() != 10);
        let m = v.weight();
        let (v1, v2) = split_annihilator(&v).unwrap();
        prop_assert_eq!((v1.dim(), v2.dim()), (m - 1, 10 - m - 1));
        prop_assert_eq!(v1.join(&v2), annihilator(&v));
    }

    #[test]
    fn family_dimension_law(vs in vec(even_bits(6), 1..6)) {
        let mut rows = vec![Gf2Vector::ones(12)];
        rows.extend(vs.iter().cloned());
        let independent = Gf2Matrix::from_rows(rows).rank() == vs.len() + 1;
        prop_assume!(independent);
        let fam = annihilator_family_in(12, &vs).unwrap();
        prop_assert_eq!(fam.dim(), 12 - 1 - vs.len());
    }

    #[test]
    fn closed_spans_stay_small(vs in vec(even_bits(4), 1..5)) {
        let mut spanning = vs.clone();
        spanning.push(Gf2Vector::ones(8));
        let w = Subspace::from_spanning(8, spanning);
        if is_hadamard_closed(&w).unwrap() {
            prop_assert!(w.dim() <= 4);
        }
    }

    #[test]
    fn permutations_respect_product_and_weight(
        sigma in permutation(12),
        x in bits(12),
        y in bits(12),
    ) {
        let lhs = sigma.apply(&hprod(&x, &y).unwrap()).unwrap();
        let rhs = hprod(&sigma.apply(&x).unwrap(), &sigma.apply(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(sigma.apply(&x).unwrap().weight(), x.weight());
    }
}

fn tiny_profile() -> Arc<CohomProfile> {
    let middle = Subspace::span_of(&[
        Gf2Vector::parse("1111").unwrap(),
        Gf2Vector::parse("1100").unwrap(),
    ]);
    Arc::new(profile_from_code(3, 2, middle).unwrap())
}

/// Random element with degrees up to `3n`: low-degree coefficients are drawn
/// inside the filtration spaces.
fn random_element(
    profile: &Arc<CohomProfile>,
    rng: &mut hadring::sample::SplitMix64,
) -> RingElement {
    let n = profile.n();
    let terms = (0..=3 * n).filter_map(|d| {
        let basis = profile.space_at(d).basis_rows().to_vec();
        let mut acc = Gf2Vector::zeros(profile.ambient_len());
        for b in &basis {
            if rng.next_u64() & 1 == 1 {
                acc.xor_assign(b);
            }
        }
        (!acc.is_zero()).then_some((d, acc))
    });
    RingElement::from_terms(Arc::clone(profile), terms.collect::<Vec<_>>()).unwrap()
}

#[test]
fn ring_is_associative_and_commutative() {
    let profile = tiny_profile();
    let mut rng = hadring::sample::SplitMix64::new(4242);
    for _ in 0..300 {
        let a = random_element(&profile, &mut rng);
        let b = random_element(&profile, &mut rng);
        let c = random_element(&profile, &mut rng);
        let ab_c = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        assert_eq!(multiply(&a, &b).unwrap(), multiply(&b, &a).unwrap());
    }
}

#[test]
fn profiles_pin_top_space_and_unit() {
    for r in 1..=6 {
        let p = standard_profile_n2(r);
        let ambient = 2 * r;
        assert_eq!(p.filtration().last().unwrap(), &even_subspace(r));
        for v in p.filtration() {
            assert!(v.contains(&Gf2Vector::ones(ambient)));
        }
    }
}

#[test]
fn ring_dimensions_stabilize() {
    let p = standard_profile_n2(4);
    let dims = p.ring_dimensions(10);
    assert!(dims.windows(2).all(|w| w[0] <= w[1]));
    assert!(dims[p.n()..].iter().all(|&d| d == 8));
}

#[test]
fn flag_equivalence_is_an_equivalence_relation() {
    use hadring::sample::{random_isotropic, random_permutation, SplitMix64};
    let mut rng = SplitMix64::new(701);
    for r in 2..=3 {
        for _ in 0..8 {
            let base = random_isotropic(&mut rng, r).unwrap().column_span();
            let p = Arc::new(profile_from_code(3, r, base.clone()).unwrap());
            let sigma = random_permutation(&mut rng, 2 * r);
            let tau = random_permutation(&mut rng, 2 * r);
            let q = Arc::new(
                profile_from_code(3, r, sigma.apply_subspace(&base).unwrap()).unwrap(),
            );
            let s = Arc::new(
                profile_from_code(3, r, tau.apply_subspace(&base).unwrap()).unwrap(),
            );
            // Reflexive, symmetric, transitive.
            assert!(flag_equivalent(&p, &p).unwrap().is_equivalent());
            assert!(flag_equivalent(&p, &q).unwrap().is_equivalent());
            assert!(flag_equivalent(&q, &p).unwrap().is_equivalent());
            assert!(flag_equivalent(&q, &s).unwrap().is_equivalent());
        }
    }
}
