//! Itemized verification suites: the dimension laws, the automorphism
//! census, and the classification table, each reported as named pass/fail
//! items with counters. The command-line `verify` subcommand and the
//! acceptance tests both run through here.

use serde::Serialize;

use crate::classify::{
    canonical_code, classify_isotropic, decompose, double_cosets_orthogonal_with_budget,
    family_b, stacked_identity, IsotropicMatrix, OrthogonalMatrix,
};
use crate::error::Result;
use crate::gf2::Gf2Matrix;
use crate::hadamard::{annihilator, annihilator_family, is_hadamard_closed, split_annihilator};
use crate::sample::{random_even_vector, random_isotropic, SplitMix64};

/// The two orthogonal matrices demonstrating that distinct double cosets can
/// merge into one orbit after stacking; transcribed digit for digit.
pub const P1_TEXT: &str = include_str!("../fixtures/p1.txt");
pub const P2_TEXT: &str = include_str!("../fixtures/p2.txt");

pub fn fixture_p1() -> OrthogonalMatrix {
    OrthogonalMatrix::try_new(Gf2Matrix::parse(P1_TEXT).expect("fixture parses"))
        .expect("fixture is orthogonal")
}

pub fn fixture_p2() -> OrthogonalMatrix {
    OrthogonalMatrix::try_new(Gf2Matrix::parse(P2_TEXT).expect("fixture parses"))
        .expect("fixture is orthogonal")
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

impl SuiteItem {
    fn new(name: &str, passed: bool, details: String) -> Self {
        SuiteItem {
            name: name.to_string(),
            passed,
            details,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub items: Vec<SuiteItem>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite {}\n", self.suite));
        for item in &self.items {
            let mark = if item.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}: {}\n", item.name, item.details));
        }
        out
    }
}

/// Dimension laws of the annihilator machinery, sampled at `r <= max_r`.
pub fn lemma_suite(max_r: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = SplitMix64::new(seed);
    let mut items = Vec::new();

    let mut failures = 0usize;
    for _ in 0..samples {
        let r = 2 + rng.below(max_r.saturating_sub(1));
        let v = random_even_vector(&mut rng, 2 * r);
        if annihilator(&v).dim() != 2 * r - 2 {
            failures += 1;
        }
    }
    items.push(SuiteItem::new(
        "annihilator dimension 2r-2",
        failures == 0,
        format!("{samples} samples, {failures} failures"),
    ));

    let mut failures = 0usize;
    for _ in 0..samples {
        let r = 2 + rng.below(max_r.saturating_sub(1));
        let v = random_even_vector(&mut rng, 2 * r);
        let complement = v.plus(&crate::gf2::Gf2Vector::ones(2 * r));
        if annihilator(&v) != annihilator(&complement) {
            failures += 1;
        }
    }
    items.push(SuiteItem::new(
        "annihilator complement law",
        failures == 0,
        format!("{samples} samples, {failures} failures"),
    ));

    let mut failures = 0usize;
    let mut tried = 0usize;
    while tried < samples {
        let r = 2 + rng.below(max_r.saturating_sub(1));
        let k = 1 + rng.below(r - 1).min(r - 2);
        // Draw until {all-ones, v_1..v_k} is linearly independent.
        let family: Vec<_> = (0..k).map(|_| random_even_vector(&mut rng, 2 * r)).collect();
        let mut rows = vec![crate::gf2::Gf2Vector::ones(2 * r)];
        rows.extend(family.iter().cloned());
        if Gf2Matrix::from_rows(rows).rank() != k + 1 {
            continue;
        }
        tried += 1;
        if annihilator_family(&family)?.dim() != 2 * r - 1 - k {
            failures += 1;
        }
    }
    items.push(SuiteItem::new(
        "annihilator family dimension 2r-1-k",
        failures == 0,
        format!("{samples} independent families, {failures} failures"),
    ));

    let mut failures = 0usize;
    for _ in 0..samples {
        let r = 2 + rng.below(max_r.saturating_sub(1));
        let v = random_even_vector(&mut rng, 2 * r);
        let m = v.weight();
        let (v1, v2) = split_annihilator(&v)?;
        if v1.dim() != m - 1 || v2.dim() != 2 * r - m - 1 {
            failures += 1;
        }
    }
    items.push(SuiteItem::new(
        "split annihilator dimensions (m-1, 2r-m-1)",
        failures == 0,
        format!("{samples} samples, {failures} failures"),
    ));

    let mut failures = 0usize;
    let closure_samples = samples.min(500).max(1);
    for _ in 0..closure_samples {
        let r = 1 + rng.below(max_r);
        let a = random_isotropic(&mut rng, r)?;
        let span = a.column_span();
        if !is_hadamard_closed(&span)? || span.dim() > r {
            failures += 1;
        }
    }
    items.push(SuiteItem::new(
        "closed subspaces have dimension at most r",
        failures == 0,
        format!("{closure_samples} samples, {failures} failures"),
    ));

    Ok(SuiteReport {
        suite: "lemmas".into(),
        items,
    })
}

/// Exhaustive automorphism census for `r = 1, 2`.
pub fn weyl_suite() -> Result<SuiteReport> {
    let mut items = Vec::new();
    for (r, expected) in [(1usize, 2usize), (2, 24)] {
        let survivors = crate::equivalence::weyl_census(r)?;
        let all_perm = survivors.iter().all(Gf2Matrix::is_permutation_matrix);
        items.push(SuiteItem::new(
            &format!("census r={r} counts (2r)!"),
            survivors.len() == expected,
            format!("found {}, expected {expected}", survivors.len()),
        ));
        items.push(SuiteItem::new(
            &format!("census r={r} survivors are permutation matrices"),
            all_perm,
            format!("{} survivors", survivors.len()),
        ));
    }
    Ok(SuiteReport {
        suite: "weyl".into(),
        items,
    })
}

/// The classification table, representative checks, the double-coset bound,
/// and the merged-coset counterexample.
pub fn classification_suite(budget: usize) -> Result<SuiteReport> {
    let mut items = Vec::new();
    const EXPECTED: [usize; 6] = [1, 1, 1, 2, 2, 3];

    let cap = budget.min(6);
    let mut counts = Vec::new();
    for r in 1..=cap {
        counts.push(classify_isotropic(r, budget)?.len());
    }
    items.push(SuiteItem::new(
        "orbit counts for r = 1..6",
        counts == EXPECTED[..cap],
        format!("computed {counts:?}, expected {:?}", &EXPECTED[..cap]),
    ));

    if cap >= 4 {
        let classes = classify_isotropic(4, budget)?;
        let id_code = canonical_code(&stacked_identity(4)?);
        let b4_code = canonical_code(&family_b(4)?);
        let id_class = classes.iter().position(|c| *c.canonical() == id_code);
        let b4_class = classes.iter().position(|c| *c.canonical() == b4_code);
        let ok = matches!((id_class, b4_class), (Some(a), Some(b)) if a != b);
        items.push(SuiteItem::new(
            "r=4 classes are (I4;I4) and B(4)",
            ok,
            format!("identity class {id_class:?}, B(4) class {b4_class:?}"),
        ));
    }

    if budget >= 6 {
        let p1 = fixture_p1();
        let p2 = fixture_p2();
        let same_coset = crate::classify::same_orthogonal_double_coset(&p1, &p2);
        let same_orbit = canonical_code(&p1.stacked()) == canonical_code(&p2.stacked());
        items.push(SuiteItem::new(
            "P1, P2 lie in distinct double cosets",
            !same_coset,
            format!("same_coset = {same_coset}"),
        ));
        items.push(SuiteItem::new(
            "(I6;P1), (I6;P2) share one orbit",
            same_orbit,
            format!("same_orbit = {same_orbit}"),
        ));
    }

    let mut bound_ok = true;
    let mut detail = Vec::new();
    for r in 1..=cap.min(4) {
        let n = classify_isotropic(r, budget)?.len();
        let cosets = double_cosets_orthogonal_with_budget(r, budget)?;
        detail.push(format!("r={r}: {n} <= {cosets}"));
        if n > cosets {
            bound_ok = false;
        }
    }
    items.push(SuiteItem::new(
        "orbit count bounded by orthogonal double cosets",
        bound_ok,
        detail.join(", "),
    ));

    let mut gap_ok = true;
    let mut gap_detail = Vec::new();
    for r in [2usize, 3, 5] {
        if r > cap {
            continue;
        }
        let irreducible = classify_isotropic(r, budget)?
            .iter()
            .filter(|c| decompose(c.representative()).len() == 1)
            .count();
        gap_detail.push(format!("r={r}: {irreducible} irreducible classes"));
        if irreducible != 0 {
            gap_ok = false;
        }
    }
    items.push(SuiteItem::new(
        "no irreducible classes at r = 2, 3, 5",
        gap_ok,
        gap_detail.join(", "),
    ));

    Ok(SuiteReport {
        suite: "classification".into(),
        items,
    })
}

/// Every suite in order.
pub fn all_suites(budget: usize, samples: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        lemma_suite(6, samples, seed)?,
        weyl_suite()?,
        classification_suite(budget)?,
    ])
}

/// Shared helper for irreducibility of the generator families.
pub fn family_b_irreducible(l: usize) -> Result<bool> {
    let b = family_b(l)?;
    Ok(crate::classify::product_span(&b).dim() == 2 * l - 1)
}

/// Canonical codes of the two-block family for a given odd rank.
pub fn family_c_canonical_codes(r: usize) -> Result<Vec<Gf2Matrix>> {
    let mut out = Vec::new();
    let mut s = 4usize;
    while s <= (r + 1) / 2 {
        let t = r + 1 - s;
        if t >= 4 && t % 2 == 0 {
            out.push(canonical_code(&crate::classify::family_c(s, t)?));
        }
        s += 2;
    }
    Ok(out)
}

/// Irreducibility of one isotropic member via the finest decomposition.
pub fn irreducible_via_decompose(a: &IsotropicMatrix) -> bool {
    decompose(a).len() == 1
}
