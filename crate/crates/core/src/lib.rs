//! Exact Lie algebra invariants, derivation algebras, Lie contractions, and
//! explicitly constructed group and Lie algebra actions.
//!
//! Algebraic computations run over exact rationals ([`Rational`]); floating
//! point is used only where an action or flow is evaluated numerically, and
//! those paths always come with a residual report.

pub mod actions;
pub mod algebra_json;
pub mod catalog;
pub mod contractions;
pub mod derivations;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod obstructions;
pub mod rational;
pub mod sampling;
pub mod vector_fields;

pub use catalog::{catalog, CatalogName};
pub use derivations::{
    contractibility_obstruction, derivation_algebra, is_nil_family, ContractibilityVerdict,
    DerivationAlgebra, NilFamilyReport,
};
pub use error::{LieError, Result};
pub use lie::{Length, LieAlgebra, SeriesKind, SeriesReport};
pub use linalg::{RatMatrix, Subspace};
pub use obstructions::{
    borderline_analysis, min_effective_action_dim, n_action_verdict, ActionVerdict,
    ObstructionReport,
};
pub use rational::{format_rational, parse_rational, Rational};
