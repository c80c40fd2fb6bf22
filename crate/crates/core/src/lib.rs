//! GF(2) subspace lattices under the Hadamard (coordinatewise) product.
//!
//! The crate models graded rings of the form
//! `V_0 + V_1 t + ... + V_{n-1} t^{n-1} + (Z_2)^{2r}(t^n + ...)` inside
//! `(Z_2)^{2r}[t]`, where the `V_i` form a filtration of subspaces closed
//! under the Hadamard product in the appropriate degrees. On top of the
//! bit-packed linear algebra it provides:
//!
//! - the annihilator subspace machinery and its dimension laws,
//! - profile validation, ring-element arithmetic, and the equivariant index,
//! - ring-isomorphism testing by coordinate permutation, with an exhaustive
//!   automorphism census and a brute-force graded-isomorphism oracle,
//! - classification of isotropic `2r x r` matrices up to row permutation and
//!   column transformation, via orthogonal double cosets and canonical forms.

pub mod classify;
pub mod cohomology;
pub mod equivalence;
mod error;
pub mod gf2;
pub mod hadamard;
pub mod report;
pub mod sample;

pub use classify::{
    canonical_code, classify_isotropic, decompose, direct_sum, double_cosets_orthogonal,
    enumerate_orthogonal, family_a, family_b, family_c, is_irreducible, is_isotropic_matrix,
    product_span, stacked_identity, standard_form, Block, ClassificationDoc, IsotropicMatrix,
    OrbitClass, OrthogonalMatrix, ALGORITHM_VERSION, DEFAULT_BUDGET,
};
pub use cohomology::{
    equivariant_index, multiply, profile_from_code, standard_profile_n2, validate_profile,
    CohomProfile, IndexPolynomial, ProfileDoc, ProfileViolation, RingElement,
};
pub use equivalence::{
    analytic_iso, apply_permutation, brute_graded_isos, flag_equivalent, is_hadamard_automorphism,
    verify_flag_witness, weyl_census, AnalyticIso, FlagOutcome, GradedIso, Permutation, WitnessDoc,
};
pub use error::{Error, Result};
pub use gf2::{hprod, Gf2Matrix, Gf2Vector};
pub use hadamard::{
    annihilator, annihilator_family, annihilator_family_in, even_subspace, is_hadamard_closed,
    split_annihilator, symmetric_law_check, Subspace,
};
