use std::fmt::Write as _;

use serde::Serialize;

use super::field::{CompiledField, PolyVectorField};
use super::poly::Poly;
use crate::error::{LieError, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn end(&self) -> &[f64] {
        self.points
            .last()
            .expect("trajectories hold the start point")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with header `t,x1,...,xn` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let n = self.points.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 1..=n {
            let _ = write!(out, ",x{i}");
        }
        out.push('\n');
        for (t, p) in self.times.iter().zip(&self.points) {
            let _ = write!(out, "{t:.16e}");
            for x in p {
                let _ = write!(out, ",{x:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

fn rk4_step(v: &CompiledField, x: &[f64], dt: f64) -> Vec<f64> {
    let shift = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, k)| b + s * k).collect()
    };
    let k1 = v.eval(x);
    let k2 = v.eval(&shift(x, &k1, dt / 2.0));
    let k3 = v.eval(&shift(x, &k2, dt / 2.0));
    let k4 = v.eval(&shift(x, &k3, dt));
    (0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Classical fourth-order Runge-Kutta from `p` over signed duration `t`,
/// with `ceil(|t| / h)` equal steps. The trajectory includes the start
/// point.
pub fn flow(v: &PolyVectorField, p: &[f64], t: f64, h: f64) -> Result<Trajectory> {
    if !h.is_finite() || h <= 0.0 {
        return Err(LieError::InvalidInput(format!(
            "step must be positive, got {h}"
        )));
    }
    if !t.is_finite() {
        return Err(LieError::InvalidInput(format!(
            "duration must be finite, got {t}"
        )));
    }
    if p.len() != v.dim() {
        return Err(LieError::mismatch(v.dim(), p.len()));
    }
    let compiled = v.compile();
    let steps = (t.abs() / h).ceil() as usize;
    let dt = if steps == 0 { 0.0 } else { t / steps as f64 };
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(p.to_vec());
    let mut x = p.to_vec();
    for s in 1..=steps {
        x = rk4_step(&compiled, &x, dt);
        let time = dt * s as f64;
        if x.iter().any(|c| !c.is_finite()) {
            return Err(LieError::BlowUp { time });
        }
        times.push(time);
        points.push(x.clone());
    }
    Ok(Trajectory { times, points })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowCheck {
    /// `|phi_V^s(phi_W^t(p)) - phi_W^t(phi_V^s(p))|` in the sup norm.
    pub commutation_residual: f64,
    /// Largest `|f - f(p)|` over all four legs, when `f` is supplied.
    pub level_residual: Option<f64>,
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn flow_checks(
    v: &PolyVectorField,
    w: &PolyVectorField,
    p: &[f64],
    s: f64,
    t: f64,
    h: f64,
    level: Option<&Poly>,
) -> Result<FlowCheck> {
    if v.dim() != w.dim() {
        return Err(LieError::mismatch(v.dim(), w.dim()));
    }
    let wt = flow(w, p, t, h)?;
    let vs_wt = flow(v, wt.end(), s, h)?;
    let vs = flow(v, p, s, h)?;
    let wt_vs = flow(w, vs.end(), t, h)?;
    let commutation_residual = sup_dist(vs_wt.end(), wt_vs.end());
    let level_residual = match level {
        None => None,
        Some(f) => {
            if f.nvars() != v.dim() {
                return Err(LieError::mismatch(v.dim(), f.nvars()));
            }
            let f = f.to_compiled();
            let f0 = f.eval(p);
            let worst = [&wt, &vs_wt, &vs, &wt_vs]
                .iter()
                .flat_map(|tr| tr.points.iter())
                .map(|x| (f.eval(x) - f0).abs())
                .fold(0.0, f64::max);
            Some(worst)
        }
    };
    Ok(FlowCheck {
        commutation_residual,
        level_residual,
    })
}
