use liedeform_core::contractions::{
    bump_group_deformation, cocycle_check, group_contraction_st, group_contraction_unipotent,
    st_contraction, st_deformation, st_prime_deformation, verify_deformation,
    verify_group_deformation, GroupTag,
};
use serde_json::json;

use crate::report::{to_value, Check, Report};
use crate::{CliError, CliResult};

pub const ENDOMORPHISM_TOL: f64 = 1e-9;
pub const SMOOTHNESS_TOL: f64 = 1e-9;
pub const GROUP_TOL: f64 = 1e-9;
pub const ALGEBRA_SAMPLES: usize = 100;
pub const GROUP_SAMPLES: usize = 200;

pub const FAMILIES: &[&str] = &[
    "st", "st-prime", "concat", "group-st", "group-u", "bump-st", "bump-u",
];

pub fn verify(family: &str, n: usize, samples: Option<usize>, seed: u64) -> CliResult<Report> {
    if n < 2 {
        return Err(CliError::input(format!("--n must be at least 2, got {n}")));
    }
    let mut report = Report::new(format!("deform verify {family}"), seed);
    match family {
        "st" | "st-prime" | "concat" => {
            let d = match family {
                "st" => st_deformation(n)?,
                "st-prime" => st_prime_deformation(n)?,
                _ => st_contraction(n)?,
            };
            let samples = samples.unwrap_or(ALGEBRA_SAMPLES);
            let r = verify_deformation(&d, samples, seed);
            report.tolerance("endomorphism", ENDOMORPHISM_TOL);
            report.tolerance("smoothness", SMOOTHNESS_TOL);
            report.check(Check::exact("cocycle", cocycle_check(n)));
            report.check(Check::exact("d1_identity_before_zero", r.d1_exact));
            report.check(Check::exact("d2_constant_after_one", r.d2_exact));
            report.check(Check::bounded(
                "d3_flat_junctions",
                r.smoothness_max_quotient,
                SMOOTHNESS_TOL,
            ));
            report.check(Check::exact("endomorphism_exact", r.endomorphism_exact));
            report.check(Check::bounded(
                "endomorphism_residual",
                r.endomorphism_residual,
                ENDOMORPHISM_TOL,
            ));
            if family != "st" {
                report.check(Check::exact("ends_at_zero", r.contraction));
            }
            report.result = json!({
                "family": family,
                "n": n,
                "exponents_or_shape": to_value(&d.shape),
                "junctions": d.junctions(),
                "verification": to_value(&r),
            });
        }
        "group-st" | "group-u" | "bump-st" | "bump-u" => {
            let tag = if family.ends_with("st") {
                GroupTag::StCirc
            } else {
                GroupTag::Unipotent
            };
            let d = match family {
                "group-st" => group_contraction_st(n)?,
                "group-u" => group_contraction_unipotent(n)?,
                _ => bump_group_deformation(tag, n)?,
            };
            let samples = samples.unwrap_or(GROUP_SAMPLES);
            let r = verify_group_deformation(&d, samples, seed);
            report.tolerance("group", GROUP_TOL);
            report.check(Check::bounded(
                "homomorphism_residual",
                r.homomorphism_residual,
                GROUP_TOL,
            ));
            report.check(Check::bounded(
                "determinant_residual",
                r.determinant_residual,
                GROUP_TOL,
            ));
            report.check(Check::bounded(
                "triangularity_residual",
                r.triangularity_residual,
                GROUP_TOL,
            ));
            report.check(Check::exact("positive_diagonal", r.positive_diagonal));
            report.check(Check::bounded(
                "continuity_residual",
                r.continuity_residual,
                GROUP_TOL,
            ));
            report.result = json!({
                "family": family,
                "n": n,
                "stages": to_value(&d.stages),
                "verification": to_value(&r),
            });
        }
        other => {
            return Err(CliError::input(format!(
                "unknown family {other:?}; expected one of {}",
                FAMILIES.join(", ")
            )))
        }
    }
    Ok(report)
}
