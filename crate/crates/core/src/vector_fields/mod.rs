//! Polynomial vector fields with exact brackets, commuting families built
//! from a first integral, infinitesimal projective actions, and numerical
//! flows.
//!
//! The bracket convention is `[V, W] = (DW)V - (DV)W`. Whether a given
//! linear map from a Lie algebra respects brackets or reverses them is
//! measured by [`action_homomorphism_check`].

mod field;
mod flow;
mod poly;

pub use field::{
    action_homomorphism_check, annihilation_check, annihilation_residual, commuting_family,
    fixed_point_check, hamiltonian_field, orbit_dimension, projective_action,
    projective_infinitesimal, projective_kernel, tangent_to_hyperplane, vf_bracket,
    CommutingFamily, CompiledField, HomomorphismReport, OrbitReport, PolyVectorField,
    ProjectiveKernel, VFAction, NEAR_DEGENERATE_THRESHOLD, ORBIT_RANK_THRESHOLD,
};
pub use flow::{flow, flow_checks, FlowCheck, Trajectory};
pub use poly::{
    coefficient_rank, format_monomial, parse_monomial, CompiledPoly, Poly, PolyDocument,
    UnivariateDocument,
};
