//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always print; exits nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use liedeform_core::catalog::standard_catalog;
use liedeform_core::contractions::{
    bump_group_deformation, group_contraction_st, group_contraction_unipotent, st_contraction,
    st_deformation, verify_deformation, verify_group_deformation, ExponentTable, GroupTag,
    TransitionProfile,
};
use liedeform_core::derivations::NilCertificate;
use liedeform_core::sampling::DEFAULT_SEED;
use liedeform_core::vector_fields::{
    action_homomorphism_check, commuting_family, flow_checks, hamiltonian_field, projective_action,
    projective_kernel, Poly, PolyDocument,
};
use liedeform_core::{
    borderline_analysis, catalog, contractibility_obstruction, derivation_algebra, is_nil_family,
    n_action_verdict, ActionVerdict, CatalogName, ContractibilityVerdict, LieAlgebra, RatMatrix,
    Rational, Subspace,
};
use serde_json::Value;

const ENDOMORPHISM_TOL: f64 = 1e-9;
const DEFORM_SAMPLES: usize = 100;
const GROUP_TOL: f64 = 1e-9;
const GROUP_SAMPLES: usize = 200;
const BALL_COMPOSITION_TOL: f64 = 1e-6;
const BALL_SAMPLES: &str = "200";
const EFFECTIVENESS: f64 = 1e-6;
const FLOW_STEP: f64 = 1e-3;
const FLOW_COMMUTATION_TOL: f64 = 1e-5;
const LEVEL_TOL: f64 = 1e-8;
const COVER_TOL: f64 = 1e-9;
const COVER_SAMPLES: &str = "100";

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["liedeform"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = liedeform_cli::run(argv, None, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (code, out) = cli(args);
    let v: Value = serde_json::from_str(&out).map_err(|e| format!("{args:?}: {e}"))?;
    if code > 1 {
        return Err(format!("{args:?} exited {code}"));
    }
    Ok(v)
}

fn finding<'a>(report: &'a Value, name: &str) -> Result<&'a Value, String> {
    report["findings"]
        .as_array()
        .and_then(|fs| fs.iter().find(|f| f["name"] == name))
        .ok_or_else(|| format!("missing finding {name}"))
}

fn value_of(report: &Value, name: &str) -> Result<f64, String> {
    finding(report, name)?["value"]
        .as_f64()
        .ok_or_else(|| format!("{name} has no value"))
}

fn passed(report: &Value, name: &str) -> Result<bool, String> {
    Ok(finding(report, name)?["passed"] == true)
}

// Integer matrices and an exact rank by fraction-free elimination, kept
// independent of the library's rational linear algebra.

type IMat = Vec<Vec<i128>>;

fn imat_commutator(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let mut c = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                c[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
        }
    }
    c
}

fn bareiss_rank(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..m.len() {
            for k in c + 1..cols {
                m[r][k] = (m[r][k] * m[rank][c] - m[r][c] * m[rank][k]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Keeps the vectors that raise the rank.
fn independent(mats: Vec<IMat>) -> Vec<IMat> {
    let mut kept: Vec<IMat> = Vec::new();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for m in mats {
        let flat: Vec<i128> = m.iter().flatten().copied().collect();
        rows.push(flat);
        if bareiss_rank(&rows) > kept.len() {
            kept.push(m);
        } else {
            rows.pop();
        }
    }
    kept
}

fn oracle_st_derived_length(m: usize) -> usize {
    let unit = |i: usize, j: usize| {
        let mut e = vec![vec![0i128; m]; m];
        e[i][j] = 1;
        e
    };
    let mut basis: Vec<IMat> = (0..m - 1)
        .map(|k| {
            let mut h = unit(k, k);
            h[k + 1][k + 1] = -1;
            h
        })
        .collect();
    for i in 0..m {
        for j in i + 1..m {
            basis.push(unit(i, j));
        }
    }
    let mut length = 0;
    while !basis.is_empty() {
        let mut brackets = Vec::new();
        for a in &basis {
            for b in &basis {
                brackets.push(imat_commutator(a, b));
            }
        }
        basis = independent(brackets);
        length += 1;
    }
    length
}

fn algebra(name: CatalogName) -> LieAlgebra {
    catalog(&name).expect("catalog algebra")
}

fn c1_catalog_validity() -> Outcome {
    let names = standard_catalog();
    for name in &names {
        let v = algebra(*name).jacobi_check();
        ensure(
            v.is_empty(),
            format!("{name}: {} violating triples", v.len()),
        )?;
    }
    ensure(
        names.contains(&CatalogName::MuellerRoemer7),
        "mr7 not in catalog",
    )?;
    // The mr7 table as stated: [X1, Xk] = X(k+1) for k = 2..6 plus four more.
    let g = algebra(CatalogName::MuellerRoemer7);
    let one = Rational::from_integer(1.into());
    for k in 1..6 {
        ensure(
            g.structure_constant(0, k, k + 1) == one,
            format!("[X1, X{}] != X{}", k + 1, k + 2),
        )?;
    }
    let check = |i, j, k, c: i64| g.structure_constant(i, j, k) == Rational::from_integer(c.into());
    ensure(
        check(1, 2, 5, 1) && check(1, 3, 6, 1) && check(2, 3, 6, 1) && check(1, 4, 6, -1),
        "mr7 extra brackets differ",
    )?;
    Ok(format!("{} algebras, mr7 table matches", names.len()))
}

fn c2_derived_lengths() -> Outcome {
    let expected = [2usize, 3, 3, 4, 4];
    let mut got = Vec::new();
    for (m, &e) in (2..=6).zip(&expected) {
        let computed = algebra(CatalogName::St(m)).derived_length().finite();
        let oracle = oracle_st_derived_length(m);
        ensure(
            computed == Some(e),
            format!("st{m}: computed {computed:?}, expected {e}"),
        )?;
        ensure(oracle == e, format!("st{m}: oracle {oracle}, expected {e}"))?;
        let r = cli_json(&["algebra", "analyze", &format!("catalog:st{m}")])?;
        let q = &r["result"]["quoted_derived_length"];
        ensure(
            q["agrees"] == false && q["value"] == m + 1,
            format!("st{m}: report does not flag the quoted value: {q}"),
        )?;
        ensure(
            r["notes"].as_array().is_some_and(|n| !n.is_empty()),
            format!("st{m}: no note"),
        )?;
        got.push(e);
    }
    Ok(format!(
        "lengths {got:?}, quoted m+1 flagged in every report"
    ))
}

fn c3_nilpotency_classes() -> Outcome {
    for m in 2..=6 {
        let g = algebra(CatalogName::StPrime(m));
        let class = g.nilpotency_class().finite();
        ensure(class == Some(m - 1), format!("n{m}: class {class:?}"))?;
        // Grading by j - i: the k-th term is spanned by E_ij with j - i > k.
        let graded: Vec<usize> = (0..m)
            .map(|k| (1..m).filter(|d| *d > k).map(|d| m - d).sum())
            .collect();
        let dims = g.lower_central_series().dims();
        ensure(
            dims == graded,
            format!("n{m}: series {dims:?}, grading {graded:?}"),
        )?;
    }
    Ok("class(n(m)) = m - 1 for m = 2..6".into())
}

fn jacobson(g: &LieAlgebra) -> Result<bool, String> {
    let g1 = g
        .subalgebra(&g.commutator_ideal(), "g'")
        .map_err(|e| e.to_string())?;
    Ok(g.is_solvable() == g1.is_nilpotent())
}

fn c4_jacobson() -> Outcome {
    let algebras: Vec<LieAlgebra> = standard_catalog().into_iter().map(algebra).collect();
    let mut sums = 0;
    for (a, g) in algebras.iter().enumerate() {
        ensure(jacobson(g)?, format!("{} fails", g.name()))?;
        for h in &algebras[a..] {
            let s = g.direct_sum(h);
            ensure(jacobson(&s)?, format!("{} + {} fails", g.name(), h.name()))?;
            sums += 1;
        }
    }
    Ok(format!("{} algebras, {sums} direct sums", algebras.len()))
}

fn flag_certifies(mats: &[RatMatrix], flag: &[Subspace]) -> bool {
    flag.windows(2).all(|w| {
        w[1].basis_vectors().iter().all(|v| {
            mats.iter().all(|m| {
                m.mul_vec(v)
                    .is_ok_and(|mv| w[0].contains(&mv).unwrap_or(false))
            })
        })
    }) && flag.first().is_some_and(Subspace::is_zero)
        && flag.last().is_some_and(|w| w.dim() == w.ambient_dim())
}

fn c5_mueller_roemer() -> Outcome {
    let g = algebra(CatalogName::MuellerRoemer7);
    let der = derivation_algebra(&g);
    ensure(
        der.all_satisfy_leibniz(),
        "basis element is not a derivation",
    )?;
    let nil = is_nil_family(&der.basis, 7).map_err(|e| e.to_string())?;
    ensure(nil.nilpotent, "derivations are not a nil family")?;
    let NilCertificate::Flag(nil_flag) = &nil.certificate else {
        return Err(format!("certificate is not a flag: {:?}", nil.certificate));
    };
    ensure(
        flag_certifies(&der.basis, nil_flag),
        "nil flag does not check",
    )?;
    let ContractibilityVerdict::Obstructed { flag } = contractibility_obstruction(&g) else {
        return Err("mr7 is not obstructed".into());
    };
    ensure(
        flag_certifies(&der.basis, &flag),
        "obstruction flag does not check",
    )?;
    for m in [2, 3] {
        let d = derivation_algebra(&algebra(CatalogName::Abelian(m))).dim();
        ensure(d == m * m, format!("der(ab{m}) has dim {d}"))?;
    }
    Ok(format!(
        "dim der(mr7) = {}, obstructed, flag dims {:?}; der(ab2) = 4, der(ab3) = 9",
        der.dim(),
        flag.iter().map(Subspace::dim).collect::<Vec<_>>()
    ))
}

fn c6_cocycle_and_profile() -> Outcome {
    let e = ExponentTable::standard(8);
    for i in 0..8 {
        for j in i..8 {
            for k in j..8 {
                ensure(
                    e.get(i, j) + e.get(j, k) == e.get(i, k),
                    format!("cocycle fails at ({}, {}, {})", i + 1, j + 1, k + 1),
                )?;
            }
        }
    }
    let p = TransitionProfile::FlatExponential;
    for t in [f64::NEG_INFINITY, -1e300, -3.0, -1e-300, -0.0, 0.0] {
        ensure(p.eval(t) == 1.0, format!("sigma({t}) != 1"))?;
    }
    for t in [1.0, 1.0 + f64::EPSILON, 2.0, 1e300, f64::INFINITY] {
        ensure(p.eval(t) == 0.0, format!("sigma({t}) != 0"))?;
    }
    Ok("c_ij c_jk = c_ik for 1 <= i <= j <= k <= 8; sigma boundary clauses exact".into())
}

fn c7_deformations() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        for (label, d) in [("st", st_deformation(n)), ("diag#st", st_contraction(n))] {
            let d = d.map_err(|e| e.to_string())?;
            let r = verify_deformation(&d, DEFORM_SAMPLES, DEFAULT_SEED);
            ensure(
                r.d1_exact && r.d2_exact,
                format!("{label}({n}): D1/D2 fail"),
            )?;
            ensure(
                r.endomorphism_residual <= ENDOMORPHISM_TOL,
                format!("{label}({n}): residual {:e}", r.endomorphism_residual),
            )?;
            worst = worst.max(r.endomorphism_residual);
            if label != "st" {
                let end = d.eval_exact(1.0).ok_or("no exact value at t = 1")?;
                ensure(end.is_zero(), format!("{label}({n}) at t = 1 is not zero"))?;
                ensure(r.contraction, format!("{label}({n}) does not contract"))?;
            }
        }
    }
    Ok(format!("n = 2..5, worst endomorphism residual {worst:e}"))
}

fn c8_group_deformations() -> Outcome {
    let mut worst: f64 = 0.0;
    let families = [
        group_contraction_st(3),
        group_contraction_unipotent(3),
        bump_group_deformation(GroupTag::StCirc, 3),
        bump_group_deformation(GroupTag::Unipotent, 3),
    ];
    for d in families {
        let d = d.map_err(|e| e.to_string())?;
        let r = verify_group_deformation(&d, GROUP_SAMPLES, DEFAULT_SEED);
        for (what, v) in [
            ("homomorphism", r.homomorphism_residual),
            ("determinant", r.determinant_residual),
            ("triangularity", r.triangularity_residual),
        ] {
            ensure(v <= GROUP_TOL, format!("{}: {what} residual {v:e}", r.name))?;
            worst = worst.max(v);
        }
    }
    Ok(format!("4 families on n = 3, worst residual {worst:e}"))
}

fn c9_ball_actions() -> Outcome {
    let mut worst: f64 = 0.0;
    for s in ["ball-st3", "ball-u3", "multiball-st3", "multiball-u3"] {
        let r = cli_json(&[
            "act",
            "verify",
            "--scenario",
            &format!("builtin:{s}"),
            "--samples",
            BALL_SAMPLES,
        ])?;
        ensure(
            passed(&r, "identity_off_annulus_exact")?,
            format!("{s}: moved outside"),
        )?;
        let c = value_of(&r, "composition_residual")?;
        ensure(c <= BALL_COMPOSITION_TOL, format!("{s}: composition {c:e}"))?;
        worst = worst.max(c);
        ensure(
            passed(&r, "every_generator_moves_a_point")?,
            format!("{s}: inert generator"),
        )?;
        ensure(
            r["tolerances"]["effectiveness"] == EFFECTIVENESS,
            "effectiveness threshold",
        )?;
        if s.starts_with("multiball") {
            ensure(r["result"]["balls"] == 3, format!("{s}: k != 3"))?;
        }
    }
    Ok(format!(
        "ball and multiball (k = 3), worst composition residual {worst:e}"
    ))
}

fn c10_projective() -> Outcome {
    let mut signs = Vec::new();
    for n in 1..=3 {
        let rho = projective_action(n).map_err(|e| e.to_string())?;
        let h = action_homomorphism_check(&rho).map_err(|e| e.to_string())?;
        ensure(
            h.exact,
            format!("sl({}) on R^{n}: not a (anti)homomorphism", n + 1),
        )?;
        signs.push(h.sign);
        let k = projective_kernel(n).map_err(|e| e.to_string())?;
        ensure(
            k.is_scalars && k.kernel.dim() == 1,
            format!("kernel on gl({}) is not the scalars", n + 1),
        )?;
    }
    Ok(format!(
        "exact with bracket signs {signs:?}; kernels are scalars"
    ))
}

fn c11_commuting_family() -> Outcome {
    let f = r#"{"x1^2": "1", "x2^2": "1"}"#
        .parse::<PolyDocument>()
        .and_then(|d| d.to_poly(2))
        .map_err(|e| e.to_string())?;
    let x = hamiltonian_field(&f).map_err(|e| e.to_string())?;
    let u: Vec<Poly> = (0..4)
        .map(|k| {
            let mut coeffs = vec![Rational::from_integer(0.into()); k + 1];
            coeffs[k] = Rational::from_integer(1.into());
            Poly::univariate(&coeffs)
        })
        .collect();
    let fam = commuting_family(&f, &x, &u).map_err(|e| e.to_string())?;
    ensure(
        fam.commute,
        format!("nonzero brackets {:?}", fam.noncommuting_pairs),
    )?;
    ensure(fam.independent, "independence certificate fails")?;
    let times = [-0.5, -0.25, 0.25, 0.5];
    let points = [[0.6, 0.1], [-0.3, 0.8]];
    let (mut comm, mut level): (f64, f64) = (0.0, 0.0);
    for p in points {
        for j in 0..4 {
            for k in j + 1..4 {
                for s in times {
                    for t in times {
                        let r = flow_checks(
                            &fam.fields[j],
                            &fam.fields[k],
                            &p,
                            s,
                            t,
                            FLOW_STEP,
                            Some(&f),
                        )
                        .map_err(|e| e.to_string())?;
                        comm = comm.max(r.commutation_residual);
                        level = level.max(r.level_residual.unwrap_or(f64::INFINITY));
                    }
                }
            }
        }
    }
    ensure(
        comm <= FLOW_COMMUTATION_TOL,
        format!("commutation residual {comm:e}"),
    )?;
    ensure(level <= LEVEL_TOL, format!("level residual {level:e}"))?;
    Ok(format!(
        "brackets zero, rank 4; commutation {comm:e}, level {level:e}"
    ))
}

fn c12_obstruction_verdicts() -> Outcome {
    let h3 = algebra(CatalogName::Heisenberg(3));
    ensure(
        n_action_verdict(&h3, 1) == ActionVerdict::Impossible,
        "h3 in dimension 1 is not impossible",
    )?;
    let n3 = algebra(CatalogName::N(3));
    ensure(
        n_action_verdict(&n3, 2) == ActionVerdict::Degenerate,
        "N3 in dimension 2 is not degenerate",
    )?;
    let rep = borderline_analysis(&n3).map_err(|e| e.to_string())?;
    ensure(
        rep.last_term_central && rep.center_dim == 2,
        "N3: central certificate",
    )?;
    let last = rep
        .last_derived_term
        .as_ref()
        .ok_or("N3: no last derived term")?;
    ensure(last.dim() == 1, "N3: g' is not one-dimensional")?;
    let b = borderline_analysis(&h3).map_err(|e| e.to_string())?;
    ensure(
        b.center_dim == 1,
        format!("h3: center dim {}", b.center_dim),
    )?;
    let bound = b.min_effective_dim.ok_or("h3: no bound")?;
    ensure(
        n_action_verdict(&h3, bound) == ActionVerdict::NoVerdict,
        "h3 at its borderline has a central obstruction",
    )?;
    Ok(format!(
        "h3/1 impossible, N3/2 degenerate (dim C = 2), h3 borderline {bound} unobstructed"
    ))
}

fn c13_cover() -> Outcome {
    let r = cli_json(&[
        "act",
        "verify",
        "--scenario",
        "builtin:cover-interval",
        "--samples",
        COVER_SAMPLES,
    ])?;
    let comp = value_of(&r, "composition_residual")?;
    let deck = value_of(&r, "deck_equivariance_residual")?;
    ensure(comp <= COVER_TOL, format!("composition {comp:e}"))?;
    ensure(deck <= COVER_TOL, format!("deck equivariance {deck:e}"))?;
    ensure(passed(&r, "endpoints_fixed_exact")?, "endpoints moved")?;
    ensure(passed(&r, "midpoint_moved")?, "no generator moves 1/2")?;
    ensure(r["result"]["action"]["samples"] == 100, "sample count")?;
    Ok(format!(
        "composition {comp:e}, deck {deck:e}, endpoints fixed, 1/2 moved"
    ))
}

fn c14_determinism() -> Outcome {
    let runs: &[&[&str]] = &[
        &["algebra", "analyze", "catalog:mr7"],
        &["deform", "verify", "--family", "concat", "--n", "4"],
        &[
            "act",
            "verify",
            "--scenario",
            "builtin:multiball-u3",
            "--samples",
            "50",
        ],
        &["act", "verify", "--scenario", "builtin:cover-disk"],
        &["vf", "verify", "--scenario", "builtin:projective2"],
    ];
    for args in runs {
        let (_, a) = cli(args);
        let (_, b) = cli(args);
        ensure(
            !a.is_empty() && a == b,
            format!("{args:?} differs between runs"),
        )?;
    }
    let bin = env!("CARGO_BIN_EXE_liedeform");
    let args = [
        "act",
        "verify",
        "--scenario",
        "builtin:ball-st3",
        "--seed",
        "7",
    ];
    let out: Vec<Vec<u8>> = (0..2)
        .map(|_| Command::new(bin).args(args).output().map(|o| o.stdout))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(
        out[0] == out[1] && !out[0].is_empty(),
        "binary output differs",
    )?;
    Ok(format!(
        "{} in-process commands and the binary are byte-identical",
        runs.len()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 14] = [
        ("catalog validity", c1_catalog_validity),
        ("derived lengths of st(m)", c2_derived_lengths),
        ("nilpotency classes of n(m)", c3_nilpotency_classes),
        ("solvable iff commutator ideal nilpotent", c4_jacobson),
        ("derivation obstruction for mr7", c5_mueller_roemer),
        ("cocycle identity and profile ends", c6_cocycle_and_profile),
        ("algebra deformations", c7_deformations),
        ("group deformations", c8_group_deformations),
        ("ball actions", c9_ball_actions),
        ("projective actions", c10_projective),
        ("commuting families", c11_commuting_family),
        ("obstruction verdicts", c12_obstruction_verdicts),
        ("cover action", c13_cover),
        ("determinism", c14_determinism),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({ms} ms)", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {msg} ({ms} ms)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.1} s",
        criteria.len() - failures,
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
