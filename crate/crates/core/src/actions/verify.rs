use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::sampling::sample_rng;

/// A group acting on a space, evaluated pointwise.
pub trait Action {
    type Element: Clone;
    type Point: Clone;

    fn act(&self, g: &Self::Element, y: &Self::Point) -> Result<Self::Point>;
    fn compose(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;
    fn identity(&self) -> Self::Element;
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectivenessWitness {
    pub generator: usize,
    /// Point coordinates, `None` when no sampled point moved.
    pub point: Option<Vec<f64>>,
    pub displacement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionReport {
    pub identity_residual: f64,
    pub composition_residual: f64,
    pub witnesses: Vec<EffectivenessWitness>,
    pub samples: usize,
    pub seed: u64,
    /// Evaluation errors (such as a singular element) encountered while
    /// sampling; any error fails the report.
    pub errors: usize,
}

impl ActionReport {
    pub fn all_generators_move(&self) -> bool {
        self.witnesses.iter().all(|w| w.point.is_some())
    }

    pub fn passes(&self, composition_tol: f64) -> bool {
        self.errors == 0
            && self.identity_residual <= composition_tol
            && self.composition_residual <= composition_tol
            && self.all_generators_move()
    }
}

/// Checks `e.y = y` and `(gh).y = g.(h.y)` on `count` seeded samples and
/// searches for a point moved by at least `threshold` for every generator.
///
/// Sample `i` draws `(g, h, y)` from its own stream, so the report does not
/// depend on evaluation order.
#[allow(clippy::too_many_arguments)]
pub fn verify_action<A: Action>(
    action: &A,
    mut group_sampler: impl FnMut(&mut ChaCha8Rng) -> A::Element,
    mut point_sampler: impl FnMut(&mut ChaCha8Rng) -> A::Point,
    generators: &[A::Element],
    coords: impl Fn(&A::Point) -> Vec<f64>,
    count: usize,
    seed: u64,
    threshold: f64,
) -> ActionReport {
    let e = action.identity();
    let mut id_res: f64 = 0.0;
    let mut comp_res: f64 = 0.0;
    let mut errors = 0;
    for i in 0..count {
        let mut rng = sample_rng(seed, 31, i as u64);
        let g = group_sampler(&mut rng);
        let h = group_sampler(&mut rng);
        let y = point_sampler(&mut rng);
        let gh = action.compose(&g, &h);
        let outcome = (|| -> Result<(f64, f64)> {
            let ey = action.act(&e, &y)?;
            let lhs = action.act(&gh, &y)?;
            let rhs = action.act(&g, &action.act(&h, &y)?)?;
            Ok((action.distance(&ey, &y), action.distance(&lhs, &rhs)))
        })();
        match outcome {
            Ok((a, b)) => {
                id_res = id_res.max(a);
                comp_res = comp_res.max(b);
            }
            Err(_) => errors += 1,
        }
    }

    let witnesses = generators
        .iter()
        .enumerate()
        .map(|(k, gen)| {
            let mut best: Option<(A::Point, f64)> = None;
            for i in 0..count {
                let mut rng = sample_rng(seed, 32 + k as u64, i as u64);
                let y = point_sampler(&mut rng);
                let Ok(moved) = action.act(gen, &y) else {
                    continue;
                };
                let d = action.distance(&moved, &y);
                if d >= threshold && best.as_ref().is_none_or(|(_, b)| d > *b) {
                    best = Some((y, d));
                }
            }
            match best {
                Some((y, d)) => EffectivenessWitness {
                    generator: k,
                    point: Some(coords(&y)),
                    displacement: d,
                },
                None => EffectivenessWitness {
                    generator: k,
                    point: None,
                    displacement: 0.0,
                },
            }
        })
        .collect();

    ActionReport {
        identity_residual: id_res,
        composition_residual: comp_res,
        witnesses,
        samples: count,
        seed,
        errors,
    }
}
