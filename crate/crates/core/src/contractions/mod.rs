//! One-parameter deformations of Lie algebras and matrix groups.
//!
//! A deformation is a smooth family of endomorphisms `theta_t` that is the
//! identity for `t <= 0` and constant for `t >= 1`; a Lie contraction ends
//! at the trivial endomorphism. Families here scale basis elements (or
//! matrix entries) by integer powers of one transition profile, so the
//! endomorphism law reduces to exponent arithmetic.

mod algebra;
mod group;
mod profile;

pub use algebra::{
    concatenate, diag_contraction, st_contraction, st_deformation, st_prime_deformation,
    verify_deformation, AlgebraDeformation, DeformationReport, DeformationShape,
};
pub use group::{
    bump_group_deformation, group_contraction_st, group_contraction_unipotent,
    verify_group_deformation, GroupDeformation, GroupReport, GroupTag, Stage, StageMap,
};
pub use profile::{cocycle_check, ExponentTable, TransitionProfile};
