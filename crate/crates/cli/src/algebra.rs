use liedeform_core::algebra_json::AlgebraDocument;
use liedeform_core::derivations::{contractibility_obstruction_with, derivation_algebra};
use liedeform_core::obstructions::{obstruction_report, verdict_from_report};
use liedeform_core::{catalog, CatalogName, ContractibilityVerdict, LieAlgebra, Subspace};
use serde_json::{json, Value};

use crate::report::{to_value, Check, Report};
use crate::{read_file, CliError, CliResult};

pub struct Loaded {
    pub algebra: LieAlgebra,
    pub catalog: Option<CatalogName>,
    pub document: AlgebraDocument,
}

/// `catalog:NAME` or a path to an algebra JSON file. Jacobi is not checked
/// here so callers can report violations. The echoed document is
/// canonical (`p/q` coefficients, sorted brackets).
pub fn load(source: &str) -> CliResult<Loaded> {
    if let Some(name) = source.strip_prefix("catalog:") {
        let id: CatalogName = name.parse()?;
        let g = catalog(&id)?;
        return Ok(Loaded {
            document: AlgebraDocument::from_algebra(&g),
            algebra: g,
            catalog: Some(id),
        });
    }
    let text = read_file(source)?;
    let document: AlgebraDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{source}: malformed algebra JSON: {e}")))?;
    let algebra = document.to_algebra_unchecked()?;
    Ok(Loaded {
        document: AlgebraDocument::from_algebra(&algebra),
        algebra,
        catalog: None,
    })
}

/// Adds the Jacobi check; returns false (with the violations recorded) when
/// the table is not a Lie algebra.
fn jacobi_gate(report: &mut Report, loaded: &Loaded) -> bool {
    let violations = loaded.algebra.jacobi_check();
    let ok = violations.is_empty();
    let mut c = Check::exact("jacobi", ok);
    if !ok {
        c = c.with_detail(format!("{} violating triples", violations.len()));
        let triples: Vec<[usize; 3]> = violations
            .iter()
            .map(|&(i, j, k)| [i + 1, j + 1, k + 1])
            .collect();
        report.result = json!({
            "algebra": to_value(&loaded.document),
            "jacobi_violations": triples,
        });
    }
    report.check(c);
    ok
}

fn contractibility_value(v: &ContractibilityVerdict) -> Value {
    match v {
        ContractibilityVerdict::Obstructed { flag } => json!({
            "verdict": v.label(),
            "certificate": "flag",
            "flag_dims": flag.iter().map(Subspace::dim).collect::<Vec<_>>(),
            "flag": to_value(flag),
        }),
        ContractibilityVerdict::Inconclusive { witness } => json!({
            "verdict": v.label(),
            "certificate": if witness.is_some() { "non_nilpotent_derivation" } else { "none" },
            "witness": to_value(witness),
        }),
    }
}

pub fn analyze(source: &str, seed: u64) -> CliResult<Report> {
    let loaded = load(source)?;
    let mut report = Report::new("algebra analyze", seed);
    if !jacobi_gate(&mut report, &loaded) {
        return Ok(report);
    }
    let g = &loaded.algebra;
    let n = g.dim();
    let derived = g.derived_series();
    let lower = g.lower_central_series();
    let solvable = derived.length.is_finite();
    let nilpotent = lower.length.is_finite();

    let g1 = g.subalgebra(&g.commutator_ideal(), "commutator")?;
    let jacobson = solvable == g1.is_nilpotent();
    report.check(
        Check::exact("jacobson_equivalence", jacobson).with_detail(format!(
            "solvable = {solvable}, commutator ideal nilpotent = {}",
            g1.is_nilpotent()
        )),
    );

    let der = derivation_algebra(g);
    report.check(Check::exact(
        "derivations_satisfy_leibniz",
        der.all_satisfy_leibniz(),
    ));
    report.check(Check::exact(
        "derivations_closed",
        der.is_commutator_closed(),
    ));
    let inner = Subspace::span(
        n * n,
        (0..n).map(|i| g.ad_basis(i).entries().to_vec()).collect(),
    )?;
    let inner_contained = (0..n).all(|i| der.contains(&g.ad_basis(i)).unwrap_or(false));
    report.check(Check::exact("inner_derivations_contained", inner_contained));
    let verdict = contractibility_obstruction_with(&der);

    let quoted = loaded.catalog.and_then(|c| c.quoted_derived_length());
    let mut quoted_value = Value::Null;
    if let Some(q) = quoted {
        let computed = derived.length.finite();
        let agrees = computed == Some(q);
        quoted_value = json!({"value": q, "agrees": agrees});
        if !agrees {
            report.note(format!(
                "computed derived length {} of {} differs from the quoted value {q}",
                derived.length,
                g.name()
            ));
        }
    }

    report.result = json!({
        "algebra": to_value(&loaded.document),
        "derived_series": derived.dims(),
        "derived_length": to_value(&derived.length),
        "quoted_derived_length": quoted_value,
        "lower_central_series": lower.dims(),
        "nilpotency_class": to_value(&lower.length),
        "solvable": solvable,
        "nilpotent": nilpotent,
        "abelian": g.is_abelian(),
        "commutator_ideal_nilpotent": g1.is_nilpotent(),
        "center": to_value(&g.center()),
        "derivations": {
            "dim": der.dim(),
            "inner_dim": inner.dim(),
            "basis": to_value(&der.basis),
        },
        "contractibility": contractibility_value(&verdict),
        "min_effective_action_dim": min_dim_value(g),
    });
    Ok(report)
}

fn min_dim_value(g: &LieAlgebra) -> Value {
    to_value(&liedeform_core::min_effective_action_dim(g))
}

pub fn obstruct(source: &str, dim: Option<usize>, seed: u64) -> CliResult<Report> {
    let loaded = load(source)?;
    let mut report = Report::new("algebra obstruct", seed);
    if !jacobi_gate(&mut report, &loaded) {
        return Ok(report);
    }
    let g = &loaded.algebra;
    let rep = obstruction_report(g);
    let verdict = dim.map(|d| {
        json!({
            "dim": d,
            "verdict": verdict_from_report(&rep, d).label(),
        })
    });
    if let (Some(CatalogName::N(m)), Some(bound)) = (loaded.catalog, rep.min_effective_dim) {
        if bound != m {
            report.note(format!(
                "the degeneracy claim for N{m} is usually stated in dimension {m}; the computed \
                 borderline dimension is {bound} and verdicts use the computed value"
            ));
        }
    }
    report.result = json!({
        "obstruction": to_value(&rep),
        "query": to_value(&verdict),
    });
    Ok(report)
}
