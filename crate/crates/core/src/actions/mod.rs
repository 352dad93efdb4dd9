//! Concrete group actions and a sampler-driven verifier for the action
//! axioms.
//!
//! * [`sphere_action`]: linear groups on the unit sphere, `x -> gx/|gx|`.
//! * [`suspension_act`] and [`cylinder_transfer`]: the levelwise action
//!   `(x, t) -> (Lambda_t(g) x, t)` on the cylinder `S^{n-1} x R` and its
//!   radial identification with `R^n \ {0}`.
//! * [`BallAction`], [`MultiBallAction`]: compactly supported actions on
//!   `R^n` built from bump deformations.
//! * [`cover`]: the lifted projective action of `SL(2)` on the line, the
//!   interval and the disk.

pub mod cover;
mod euclidean;
mod verify;

pub use cover::{cover_compose, disk_action, interval_action, CoverElement};
pub use euclidean::{
    cylinder_transfer, cylinder_transfer_inverse, sphere_action, suspension_act, BallAction,
    BallVariant, MultiBallAction, SphereAction, SuspensionAction,
};
pub use verify::{verify_action, Action, ActionReport, EffectivenessWitness};

/// Displacement (sup norm) at or above which a point counts as moved.
pub const EFFECTIVENESS_THRESHOLD: f64 = 1e-6;
