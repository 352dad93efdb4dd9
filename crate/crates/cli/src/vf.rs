use liedeform_core::sampling::sample_rng;
use liedeform_core::vector_fields::{
    action_homomorphism_check, annihilation_residual, commuting_family, flow, flow_checks,
    hamiltonian_field, orbit_dimension, projective_action, projective_kernel,
    tangent_to_hyperplane, Poly, PolyDocument, Trajectory, UnivariateDocument,
};
use liedeform_core::LieError;
use rand::Rng;
use serde_json::json;

use crate::report::{to_value, Check, Report};
use crate::scenarios::{FieldSpec, VfScenario};
use crate::{CliError, CliResult};

pub const COMMUTATION_TOL: f64 = 1e-5;
pub const LEVEL_TOL: f64 = 1e-8;
pub const ORBIT_SAMPLES: usize = 100;
/// Orbit survey points are uniform in `[-ORBIT_BOX, ORBIT_BOX]^n`.
pub const ORBIT_BOX: f64 = 2.0;
const ORBIT_STREAM: u64 = 41;

pub fn verify(s: &VfScenario, seed: u64) -> CliResult<Report> {
    match s {
        VfScenario::CommutingFamily {
            n,
            f,
            field,
            u,
            points,
            times,
            step,
            commutation_tolerance,
            level_tolerance,
        } => {
            let mut report = Report::new("vf verify", seed);
            let tols = (
                commutation_tolerance.unwrap_or(COMMUTATION_TOL),
                level_tolerance.unwrap_or(LEVEL_TOL),
            );
            family(
                &mut report,
                *n,
                f,
                field.as_ref(),
                u,
                points,
                times,
                *step,
                tols,
            )?;
            Ok(report)
        }
        VfScenario::Projective { n, samples } => {
            projective(*n, samples.unwrap_or(ORBIT_SAMPLES), seed)
        }
        VfScenario::Flow { .. } => Ok(flow_run(s, seed)?.0),
    }
}

fn check_points(n: usize, points: &[Vec<f64>]) -> CliResult<()> {
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(CliError::input(format!(
            "point {p:?} has {} coordinates but n = {n}",
            p.len()
        )));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn family(
    report: &mut Report,
    n: usize,
    f: &PolyDocument,
    field: Option<&FieldSpec>,
    u: &[UnivariateDocument],
    points: &[Vec<f64>],
    times: &[[f64; 2]],
    step: f64,
    (comm_tol, level_tol): (f64, f64),
) -> CliResult<()> {
    check_points(n, points)?;
    if u.is_empty() {
        return Err(CliError::input("the family needs at least one u_j"));
    }
    let f = f.to_poly(n)?;
    let x = match field {
        Some(spec) => spec.build(n)?,
        None => hamiltonian_field(&f)?,
    };
    report.tolerance("flow_commutation", comm_tol);
    report.tolerance("level_set", level_tol);

    let residual = annihilation_residual(&f, &x)?;
    if !residual.is_zero() {
        report.check(
            Check::exact("field_annihilates_f", false).with_detail(format!("df(X) = {residual}")),
        );
        report.result = json!({
            "f": f.to_string(),
            "field": to_value(&x),
            "annihilation_residual": residual.to_string(),
        });
        return Ok(());
    }
    report.check(Check::exact("field_annihilates_f", true));

    let us: Vec<Poly> = u.iter().map(|d| d.0.clone()).collect();
    let fam = commuting_family(&f, &x, &us)?;
    let mut c = Check::exact("pairwise_brackets_zero", fam.commute);
    if !fam.commute {
        let pairs: Vec<String> = fam
            .noncommuting_pairs
            .iter()
            .map(|(j, k)| format!("({}, {})", j + 1, k + 1))
            .collect();
        c = c.with_detail(format!("nonzero brackets: {}", pairs.join(", ")));
    }
    report.check(c);
    report.check(
        Check::exact("independent", fam.independent).with_detail(format!(
            "coefficient rank {} of {}",
            fam.coefficient_rank,
            us.len()
        )),
    );

    let mut comm: f64 = 0.0;
    let mut level: f64 = 0.0;
    let mut blowups = 0usize;
    let mut runs = 0usize;
    for p in points {
        for j in 0..fam.fields.len() {
            for k in j + 1..fam.fields.len() {
                for &[s, t] in times {
                    runs += 1;
                    match flow_checks(&fam.fields[j], &fam.fields[k], p, s, t, step, Some(&f)) {
                        Ok(r) => {
                            comm = comm.max(r.commutation_residual);
                            level = level.max(r.level_residual.unwrap_or(0.0));
                        }
                        Err(LieError::BlowUp { .. }) => blowups += 1,
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
    if blowups > 0 {
        comm = f64::INFINITY;
        level = f64::INFINITY;
    }
    report.check(
        Check::bounded("flow_commutation_residual", comm, comm_tol)
            .with_detail(format!("{runs} flow pairs, {blowups} blew up")),
    );
    report.check(Check::bounded("level_set_residual", level, level_tol));

    let tangent: Vec<usize> = (0..n)
        .filter(|&i| tangent_to_hyperplane(&x, i))
        .map(|i| i + 1)
        .collect();
    report.result = json!({
        "f": f.to_string(),
        "field": to_value(&x),
        "family": fam.fields.iter().map(|v| {
            v.components().iter().map(|c| c.to_string()).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
        "noncommuting_pairs": fam.noncommuting_pairs.iter().map(|(j, k)| [j + 1, k + 1]).collect::<Vec<_>>(),
        "coefficient_rank": fam.coefficient_rank,
        "step": step,
        "flow_runs": runs,
        "max_commutation_residual": comm,
        "max_level_residual": level,
        "tangent_to_coordinate_hyperplanes": tangent,
    });
    Ok(())
}

fn projective(n: usize, samples: usize, seed: u64) -> CliResult<Report> {
    if n == 0 {
        return Err(CliError::input("n must be at least 1"));
    }
    let mut report = Report::new("vf verify", seed);
    let rho = projective_action(n)?;
    let hom = action_homomorphism_check(&rho)?;
    let mut c = Check::exact("homomorphism_exact", hom.exact)
        .with_detail(format!("bracket sign {}", hom.sign));
    if !hom.exact {
        c = c.with_detail(format!(
            "bracket sign {}; {} violating basis pairs",
            hom.sign,
            hom.violations.len()
        ));
    }
    report.check(c);
    let kernel = projective_kernel(n)?;
    report.check(
        Check::exact("kernel_is_scalars", kernel.is_scalars)
            .with_detail(format!("kernel dimension {}", kernel.kernel.dim())),
    );

    let mut dims = Vec::with_capacity(samples);
    let mut near = 0usize;
    for i in 0..samples {
        let mut rng = sample_rng(seed, ORBIT_STREAM, i as u64);
        let p: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(-ORBIT_BOX..=ORBIT_BOX))
            .collect();
        let o = orbit_dimension(&rho, &p)?;
        near += usize::from(o.near_degenerate);
        dims.push(o.dimension);
    }
    let lowest = dims.iter().copied().min().unwrap_or(n);
    report.check(
        Check::exact("generic_orbit_dimension", dims.iter().all(|&d| d == n)).with_detail(format!(
            "smallest sampled orbit dimension {lowest}, expected {n}"
        )),
    );
    let origin = orbit_dimension(&rho, &vec![0.0; n])?;
    report.result = json!({
        "algebra": format!("sl({})", n + 1),
        "chart_dim": n,
        "homomorphism": to_value(&hom),
        "kernel": to_value(&kernel),
        "orbit_survey": {
            "samples": samples,
            "box": ORBIT_BOX,
            "min_dimension": lowest,
            "near_degenerate": near,
        },
        "origin_orbit": to_value(&origin),
    });
    Ok(report)
}

/// Integrates a `flow` scenario; the trajectory is `None` when the flow
/// blew up, in which case the report records the failure.
pub fn flow_run(s: &VfScenario, seed: u64) -> CliResult<(Report, Option<Trajectory>)> {
    let VfScenario::Flow {
        n,
        field,
        point,
        duration,
        step,
        level,
        level_tolerance,
    } = s
    else {
        return Err(CliError::input("vf flow needs a scenario of kind \"flow\""));
    };
    check_points(*n, std::slice::from_ref(point))?;
    let mut report = Report::new("vf flow", seed);
    let v = field.build(*n)?;
    let level = level.as_ref().map(|d| d.to_poly(*n)).transpose()?;
    let tr = match flow(&v, point, *duration, *step) {
        Ok(tr) => tr,
        Err(LieError::BlowUp { time }) => {
            report.check(
                Check::exact("no_blow_up", false)
                    .with_detail(format!("non-finite state at t = {time:e}")),
            );
            report.result = json!({"field": to_value(&v), "blow_up_time": time});
            return Ok((report, None));
        }
        Err(e) => return Err(e.into()),
    };
    report.check(Check::exact("no_blow_up", true));
    let mut summary = json!({
        "field": to_value(&v),
        "start": point,
        "duration": duration,
        "step": step,
        "points": tr.len(),
        "end_time": tr.times.last().copied().unwrap_or(0.0),
        "end": tr.end(),
    });
    if let Some(f) = level {
        let tol = level_tolerance.unwrap_or(LEVEL_TOL);
        report.tolerance("level_set", tol);
        let c = f.to_compiled();
        let f0 = c.eval(point);
        let drift = tr
            .points
            .iter()
            .map(|q| (c.eval(q) - f0).abs())
            .fold(0.0, f64::max);
        report.check(Check::bounded("level_set_residual", drift, tol));
        summary["level"] = json!(f.to_string());
        summary["level_residual"] = json!(drift);
    }
    report.result = summary;
    Ok((report, Some(tr)))
}
