//! Fixed inputs shared by the benchmarks.

use liedeform_core::actions::BallAction;
use liedeform_core::contractions::{bump_group_deformation, GroupTag};
use liedeform_core::vector_fields::{Poly, PolyVectorField};
use liedeform_core::{catalog, CatalogName, LieAlgebra};
use nalgebra::DVector;

pub const SEED: u64 = 20_260_101;

pub fn algebra(name: CatalogName) -> LieAlgebra {
    catalog(&name).expect("catalog algebra")
}

/// Algebras of increasing size, labelled by id.
pub fn ladder() -> Vec<(String, LieAlgebra)> {
    [
        CatalogName::Heisenberg(5),
        CatalogName::St(3),
        CatalogName::MuellerRoemer7,
        CatalogName::St(4),
        CatalogName::T(4),
        CatalogName::Sl(3),
    ]
    .into_iter()
    .map(|c| (c.id(), algebra(c)))
    .collect()
}

pub fn unit_ball(tag: GroupTag, n: usize) -> BallAction {
    let def = bump_group_deformation(tag, n).expect("bump deformation");
    BallAction::new(def, 0.25, 0.75, DVector::zeros(n), 1.0).expect("ball")
}

/// The harmonic oscillator field on the plane.
pub fn rotation() -> PolyVectorField {
    let x = Poly::var(2, 0);
    let y = Poly::var(2, 1);
    PolyVectorField::new(vec![y, x.neg()]).expect("field")
}
