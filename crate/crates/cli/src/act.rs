use std::f64::consts::{E, PI};

use liedeform_core::actions::cover::{lift_tracked, DiskAction, IntervalAction, LineAction};
use liedeform_core::actions::{
    disk_action, interval_action, verify_action, Action, ActionReport, BallAction, CoverElement,
    MultiBallAction, SphereAction, SuspensionAction, EFFECTIVENESS_THRESHOLD,
};
use liedeform_core::contractions::{
    bump_group_deformation, group_contraction_st, group_contraction_unipotent, GroupTag,
};
use liedeform_core::sampling::{random_in_shell, random_sl2, random_unit_vector, sample_rng};
use nalgebra::{DVector, Matrix2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{to_value, Check, Report};
use crate::scenarios::{ActScenario, BallSpec, CoverSpace};
use crate::{CliError, CliResult};

pub const DEFAULT_SAMPLES: usize = 200;
pub const COVER_SAMPLES: usize = 100;
pub const BALL_TOL: f64 = 1e-6;
pub const SPHERE_TOL: f64 = 1e-9;
pub const COVER_TOL: f64 = 1e-9;
/// Branch-tracking grid for the cover cross-check, in steps per `pi`.
pub const TRACKING_STEPS: usize = 1024;

const OUTSIDE_STREAM: u64 = 40;
const COLLAR_STREAM: u64 = 42;
const COLLAR_WIDTH: f64 = 1e-3;
const DECK_STREAM: u64 = 50;
const TRACKING_STREAM: u64 = 51;
const ENDPOINT_STREAM: u64 = 52;

fn vec_coords(y: &DVector<f64>) -> Vec<f64> {
    y.iter().copied().collect()
}

fn action_checks(report: &mut Report, r: &ActionReport, tol: f64) {
    report.tolerance("composition", tol);
    report.tolerance("effectiveness", EFFECTIVENESS_THRESHOLD);
    report.check(Check::bounded(
        "identity_residual",
        r.identity_residual,
        tol,
    ));
    report.check(Check::bounded(
        "composition_residual",
        r.composition_residual,
        tol,
    ));
    report.check(
        Check::exact("evaluations_succeed", r.errors == 0)
            .with_detail(format!("{} failed evaluations", r.errors)),
    );
    let still: Vec<usize> = r
        .witnesses
        .iter()
        .filter(|w| w.point.is_none())
        .map(|w| w.generator)
        .collect();
    let mut c = Check::exact("every_generator_moves_a_point", still.is_empty());
    if !still.is_empty() {
        c = c.with_detail(format!("generators without a witness: {still:?}"));
    }
    report.check(c);
}

fn tag(group: &str) -> CliResult<GroupTag> {
    Ok(GroupTag::parse(group)?)
}

fn check_n(n: usize) -> CliResult<()> {
    if n < 2 {
        return Err(CliError::input(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

pub fn run(s: &ActScenario, samples: Option<usize>, seed: u64) -> CliResult<Report> {
    let mut report = Report::new("act verify", seed);
    match s {
        ActScenario::Sphere {
            group,
            n,
            samples: sc,
            tolerance,
        } => {
            check_n(*n)?;
            let g = tag(group)?;
            let count = samples.or(*sc).unwrap_or(DEFAULT_SAMPLES);
            let tol = tolerance.unwrap_or(SPHERE_TOL);
            let n = *n;
            let r = verify_action(
                &SphereAction(n),
                |rng| g.sample(rng, n),
                |rng| random_unit_vector(rng, n),
                &g.generators(n),
                vec_coords,
                count,
                seed,
                EFFECTIVENESS_THRESHOLD,
            );
            action_checks(&mut report, &r, tol);
            report.result =
                json!({"kind": "sphere", "group": group, "n": n, "action": to_value(&r)});
        }
        ActScenario::Suspension {
            group,
            n,
            samples: sc,
            tolerance,
        } => {
            check_n(*n)?;
            let g = tag(group)?;
            let n = *n;
            let contraction = match g {
                GroupTag::StCirc => group_contraction_st(n)?,
                GroupTag::Unipotent => group_contraction_unipotent(n)?,
            };
            let action = SuspensionAction { contraction };
            let count = samples.or(*sc).unwrap_or(DEFAULT_SAMPLES);
            let tol = tolerance.unwrap_or(BALL_TOL);
            let r = verify_action(
                &action,
                |rng| g.sample(rng, n),
                |rng| random_in_shell(rng, n, 0.0, 2.0),
                &g.generators(n),
                vec_coords,
                count,
                seed,
                EFFECTIVENESS_THRESHOLD,
            );
            action_checks(&mut report, &r, tol);
            report.note("the suspension action is not compactly supported: it is the full sphere action on every ray beyond radius 1");
            report.result =
                json!({"kind": "suspension", "group": group, "n": n, "action": to_value(&r)});
        }
        ActScenario::Ball {
            group,
            n,
            r0,
            r1,
            center,
            radius,
            samples: sc,
            tolerance,
        } => {
            check_n(*n)?;
            let g = tag(group)?;
            let n = *n;
            let center = DVector::from_vec(center.clone().unwrap_or_else(|| vec![0.0; n]));
            let ball = BallAction::new(bump_group_deformation(g, n)?, *r0, *r1, center, *radius)?;
            let count = samples.or(*sc).unwrap_or(DEFAULT_SAMPLES);
            let tol = tolerance.unwrap_or(BALL_TOL);
            let r = verify_action(
                &ball,
                |rng| g.sample(rng, n),
                |rng| &ball.center + random_in_shell(rng, n, 0.0, 1.2 * ball.radius),
                &g.generators(n),
                vec_coords,
                count,
                seed,
                EFFECTIVENESS_THRESHOLD,
            );
            action_checks(&mut report, &r, tol);
            let outside = outside_identity(
                &[&ball],
                |rng| vec![g.sample(rng, n)],
                count,
                seed,
                |gs, y| ball.act_on(&gs[0], y),
            )?;
            report.check(outside);
            let collar = collar_displacement(
                &[&ball],
                |rng| vec![g.sample(rng, n)],
                count,
                seed,
                |gs, y| ball.act_on(&gs[0], y),
            )?;
            report.check(Check::bounded("collar_displacement", collar, tol));
            report.result = json!({
                "kind": "ball", "group": group, "n": n, "r0": r0, "r1": r1,
                "center": vec_coords(&ball.center), "radius": radius,
                "action": to_value(&r),
            });
        }
        ActScenario::Multiball {
            group,
            n,
            r0,
            r1,
            balls,
            samples: sc,
            tolerance,
        } => {
            check_n(*n)?;
            let g = tag(group)?;
            let n = *n;
            let multi = build_multiball(g, n, *r0, *r1, balls)?;
            let k = multi.balls.len();
            let count = samples.or(*sc).unwrap_or(DEFAULT_SAMPLES);
            let tol = tolerance.unwrap_or(BALL_TOL);
            let mut generators = Vec::new();
            for j in 0..k {
                for gen in g.generators(n) {
                    let mut e = multi.identity();
                    e[j] = gen;
                    generators.push(e);
                }
            }
            let r = verify_action(
                &multi,
                |rng| (0..k).map(|_| g.sample(rng, n)).collect(),
                |rng| {
                    let b = &multi.balls[rng.gen_range(0..k)];
                    &b.center + random_in_shell(rng, n, 0.0, 1.2 * b.radius)
                },
                &generators,
                vec_coords,
                count,
                seed,
                EFFECTIVENESS_THRESHOLD,
            );
            action_checks(&mut report, &r, tol);
            let refs: Vec<&BallAction> = multi.balls.iter().collect();
            let outside = outside_identity(
                &refs,
                |rng| (0..k).map(|_| g.sample(rng, n)).collect(),
                count,
                seed,
                |gs, y| multi.act(gs, y),
            )?;
            report.check(outside);
            let collar = collar_displacement(
                &refs,
                |rng| (0..k).map(|_| g.sample(rng, n)).collect(),
                count,
                seed,
                |gs, y| multi.act(gs, y),
            )?;
            report.check(Check::bounded("collar_displacement", collar, tol));
            report.result = json!({
                "kind": "multiball", "group": group, "n": n, "balls": k,
                "action": to_value(&r),
            });
        }
        ActScenario::Cover {
            space,
            samples: sc,
            tolerance,
        } => {
            let count = samples.or(*sc).unwrap_or(COVER_SAMPLES);
            let tol = tolerance.unwrap_or(COVER_TOL);
            cover(&mut report, *space, count, tol, seed);
        }
    }
    Ok(report)
}

fn build_multiball(
    g: GroupTag,
    n: usize,
    r0: f64,
    r1: f64,
    balls: &[BallSpec],
) -> CliResult<MultiBallAction> {
    if balls.is_empty() {
        return Err(CliError::input(
            "multiball scenario needs at least one ball",
        ));
    }
    let built = balls
        .iter()
        .map(|b| {
            if b.center.len() != n {
                return Err(CliError::input(format!(
                    "ball center has {} coordinates but n = {n}",
                    b.center.len()
                )));
            }
            Ok(BallAction::new(
                bump_group_deformation(g, n)?,
                r0,
                r1,
                DVector::from_vec(b.center.clone()),
                b.radius,
            )?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(MultiBallAction::new(built)?)
}

/// Points off every annulus (inside the inner radius, in the outer collar,
/// or outside all balls) must be returned bit-for-bit.
fn outside_identity<E>(
    balls: &[&BallAction],
    mut group: impl FnMut(&mut ChaCha8Rng) -> E,
    count: usize,
    seed: u64,
    act: impl Fn(&E, &DVector<f64>) -> liedeform_core::Result<DVector<f64>>,
) -> CliResult<Check> {
    let n = balls[0].n();
    let mut moved = 0usize;
    for i in 0..count {
        let mut rng = sample_rng(seed, OUTSIDE_STREAM, i as u64);
        let g = group(&mut rng);
        let b = balls[rng.gen_range(0..balls.len())];
        let (lo, hi) = match i % 3 {
            0 => (0.0, b.r0 * b.radius),
            1 => (b.r1 * b.radius, b.radius),
            _ => (b.radius, 3.0 * b.radius),
        };
        let y = &b.center + random_in_shell(&mut rng, n, lo, hi);
        if balls.iter().any(|bb| bb.in_support(&y)) {
            continue;
        }
        if act(&g, &y)? != y {
            moved += 1;
        }
    }
    Ok(Check::exact("identity_off_annulus_exact", moved == 0)
        .with_detail(format!("{moved} points moved outside the support")))
}

/// Largest displacement of points just inside either boundary sphere of an
/// annulus, where the action must fade out to the identity.
fn collar_displacement<E>(
    balls: &[&BallAction],
    mut group: impl FnMut(&mut ChaCha8Rng) -> E,
    count: usize,
    seed: u64,
    act: impl Fn(&E, &DVector<f64>) -> liedeform_core::Result<DVector<f64>>,
) -> CliResult<f64> {
    let n = balls[0].n();
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let mut rng = sample_rng(seed, COLLAR_STREAM, i as u64);
        let g = group(&mut rng);
        let b = balls[rng.gen_range(0..balls.len())];
        let rel = if i % 2 == 0 {
            b.r0 * (1.0 + COLLAR_WIDTH)
        } else {
            b.r1 * (1.0 - COLLAR_WIDTH)
        };
        let y = &b.center + random_unit_vector(&mut rng, n) * (rel * b.radius);
        worst = worst.max((act(&g, &y)? - &y).amax());
    }
    Ok(worst)
}

fn random_cover(rng: &mut impl Rng) -> CoverElement {
    let a = random_sl2(rng);
    let k = rng.gen_range(-2..=2);
    CoverElement::from_dmatrix(&a, k).expect("determinant one")
}

fn cover_generators() -> Vec<CoverElement> {
    let m = |a, b, c, d| CoverElement::new(Matrix2::new(a, b, c, d), 0).expect("unimodular");
    vec![
        m(E, 0.0, 0.0, 1.0 / E),
        m(1.0, 1.0, 0.0, 1.0),
        m(1.0, 0.0, 1.0, 1.0),
        CoverElement::deck(1),
    ]
}

fn cover(report: &mut Report, space: CoverSpace, count: usize, tol: f64, seed: u64) {
    let gens = cover_generators();
    let r = match space {
        CoverSpace::Line => verify_action(
            &LineAction,
            random_cover,
            |rng| rng.gen_range(-10.0..10.0),
            &gens,
            |y| vec![*y],
            count,
            seed,
            EFFECTIVENESS_THRESHOLD,
        ),
        CoverSpace::Interval => verify_action(
            &IntervalAction,
            random_cover,
            |rng| rng.gen_range(0.0..=1.0),
            &gens,
            |y| vec![*y],
            count,
            seed,
            EFFECTIVENESS_THRESHOLD,
        ),
        CoverSpace::Disk => verify_action(
            &DiskAction,
            random_cover,
            |rng| random_in_shell(rng, 2, 0.0, 1.0),
            &gens,
            vec_coords,
            count,
            seed,
            EFFECTIVENESS_THRESHOLD,
        ),
    };
    action_checks(report, &r, tol);

    let mut deck: f64 = 0.0;
    let mut tracking: f64 = 0.0;
    for i in 0..count {
        let mut rng = sample_rng(seed, DECK_STREAM, i as u64);
        let g = random_cover(&mut rng);
        let th: f64 = rng.gen_range(-10.0..10.0);
        deck = deck.max((g.apply(th + PI) - g.apply(th) - PI).abs());
        let mut rng = sample_rng(seed, TRACKING_STREAM, i as u64);
        let g = random_cover(&mut rng);
        let th: f64 = rng.gen_range(-10.0..10.0);
        let closed = CoverElement::base_lift(&g.a, th);
        tracking = tracking.max((closed - lift_tracked(&g.a, th, TRACKING_STEPS)).abs());
    }
    report.check(Check::bounded("deck_equivariance_residual", deck, tol));
    report.check(Check::bounded("branch_tracking_agreement", tracking, tol));

    let mut extra = json!(null);
    match space {
        CoverSpace::Interval => {
            let fixed = (0..count).all(|i| {
                let mut rng = sample_rng(seed, ENDPOINT_STREAM, i as u64);
                let g = random_cover(&mut rng);
                interval_action(&g, 0.0).ok() == Some(0.0)
                    && interval_action(&g, 1.0).ok() == Some(1.0)
            });
            report.check(Check::exact("endpoints_fixed_exact", fixed));
            let moves: Vec<f64> = gens
                .iter()
                .map(|g| (interval_action(g, 0.5).unwrap_or(0.5) - 0.5).abs())
                .collect();
            let best = moves.iter().copied().fold(0.0, f64::max);
            report.check(
                Check::exact("midpoint_moved", best >= EFFECTIVENESS_THRESHOLD)
                    .with_detail(format!("largest displacement of 1/2: {best:e}")),
            );
            extra = json!({"midpoint_displacements": moves});
        }
        CoverSpace::Disk => {
            let boundary = DVector::from_vec(vec![0.6, 0.8]);
            let origin = DVector::zeros(2);
            let fixed = (0..count).all(|i| {
                let mut rng = sample_rng(seed, ENDPOINT_STREAM, i as u64);
                let g = random_cover(&mut rng);
                disk_action(&g, &origin).ok().as_ref() == Some(&origin)
                    && disk_action(&g, &boundary).ok().as_ref() == Some(&boundary)
            });
            report.check(Check::exact("center_and_boundary_fixed_exact", fixed));
        }
        CoverSpace::Line => {}
    }
    report.result = json!({
        "kind": "cover",
        "space": format!("{space:?}").to_lowercase(),
        "generators": to_value(&gens),
        "action": to_value(&r),
        "extra": extra,
    });
}
