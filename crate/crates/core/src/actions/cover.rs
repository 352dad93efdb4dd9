//! Lift of the projective action of `SL(2)` to the universal cover of the
//! circle, and the induced actions on `[0, 1]` and on the closed disk.
//!
//! The projective line is parametrized by the angle `theta` of a line
//! through the origin, so the circle is `R / piZ` and the deck translation is
//! `T(theta) = theta + pi`. For `A` in `SL(2)` let `f_A` be the continuous
//! lift of `[v] -> [Av]` with `f_A(0)` in `[0, pi)`; the pair `(A, k)`
//! represents `F = T^k ∘ f_A`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use serde::Serialize;

use super::verify::Action;
use crate::error::{LieError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverElement {
    pub a: Matrix2<f64>,
    pub k: i64,
}

impl Serialize for CoverElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CoverElement", 2)?;
        let rows = [
            [self.a[(0, 0)], self.a[(0, 1)]],
            [self.a[(1, 0)], self.a[(1, 1)]],
        ];
        st.serialize_field("matrix", &rows)?;
        st.serialize_field("deck", &self.k)?;
        st.end()
    }
}

/// Angle of the line through `A (cos theta, sin theta)`, in `[0, pi)`.
fn line_angle(a: &Matrix2<f64>, theta: f64) -> f64 {
    let v = a * Vector2::new(theta.cos(), theta.sin());
    v.y.atan2(v.x).rem_euclid(PI)
}

impl CoverElement {
    pub fn new(a: Matrix2<f64>, k: i64) -> Result<Self> {
        let det = a.determinant();
        if det.is_nan() || (det - 1.0).abs() > 1e-9 {
            return Err(LieError::InvalidInput(format!(
                "cover elements need determinant 1, got {det}"
            )));
        }
        Ok(CoverElement { a, k })
    }

    pub fn from_dmatrix(a: &DMatrix<f64>, k: i64) -> Result<Self> {
        if a.nrows() != 2 || a.ncols() != 2 {
            return Err(LieError::mismatch(2, a.nrows()));
        }
        Self::new(Matrix2::new(a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]), k)
    }

    pub fn identity() -> Self {
        CoverElement {
            a: Matrix2::identity(),
            k: 0,
        }
    }

    pub fn deck(k: i64) -> Self {
        CoverElement {
            a: Matrix2::identity(),
            k,
        }
    }

    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        CoverElement {
            a: Matrix2::new(c, -s, s, c),
            k: 0,
        }
    }

    /// `f_A(theta)`. Because `f_A` is increasing and commutes with `T`, it
    /// maps `[0, pi)` onto `[f_A(0), f_A(0) + pi)`; the representative of the
    /// projective angle in that window is the lift.
    pub fn base_lift(a: &Matrix2<f64>, theta: f64) -> f64 {
        let m = (theta / PI).floor();
        let theta0 = theta - m * PI;
        let base = line_angle(a, 0.0);
        let phi = line_angle(a, theta0);
        base + (phi - base).rem_euclid(PI) + m * PI
    }

    /// `F(theta) = f_A(theta) + k pi`.
    pub fn apply(&self, theta: f64) -> f64 {
        Self::base_lift(&self.a, theta) + self.k as f64 * PI
    }

    pub fn inverse(&self) -> CoverElement {
        let inv = self.a.try_inverse().expect("determinant one");
        // f_A ∘ f_{A^-1} = T^delta exactly; compare against f_I = id rather
        // than the lift of the rounded product.
        let lhs = Self::base_lift(&self.a, Self::base_lift(&inv, 0.0));
        let delta = (lhs / PI).round() as i64;
        CoverElement {
            a: inv,
            k: -self.k - delta,
        }
    }
}

/// Lift by continuous branch tracking along a grid from 0, with step at most
/// `pi / steps_per_pi`. Used to cross-check [`CoverElement::base_lift`].
pub fn lift_tracked(a: &Matrix2<f64>, theta: f64, steps_per_pi: usize) -> f64 {
    let mut value = line_angle(a, 0.0);
    let mut prev = value;
    let steps = ((theta.abs() / PI) * steps_per_pi as f64).ceil().max(1.0) as usize;
    for s in 1..=steps {
        let th = theta * s as f64 / steps as f64;
        let cur = line_angle(a, th);
        // Increment into (-pi/2, pi/2].
        let mut d = (cur - prev).rem_euclid(PI);
        if d > PI / 2.0 {
            d -= PI;
        }
        value += d;
        prev = cur;
    }
    value
}

/// `delta` with `f_A ∘ f_B = T^delta ∘ f_{AB}`.
fn deck_correction(a: &Matrix2<f64>, b: &Matrix2<f64>) -> i64 {
    let ab = a * b;
    let lhs = CoverElement::base_lift(a, CoverElement::base_lift(b, 0.0));
    let rhs = CoverElement::base_lift(&ab, 0.0);
    ((lhs - rhs) / PI).round() as i64
}

/// `(A, k) ∘ (B, m) = (AB, k + m + delta(A, B))`.
pub fn cover_compose(a: &CoverElement, b: &CoverElement) -> CoverElement {
    CoverElement {
        a: a.a * b.a,
        k: a.k + b.k + deck_correction(&a.a, &b.a),
    }
}

/// Action on `[0, 1]`: endpoints fixed, the interior identified with the
/// line by `s -> ln(s / (1 - s))`.
pub fn interval_action(a: &CoverElement, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(LieError::InvalidInput(format!("{s} is outside [0, 1]")));
    }
    if s == 0.0 || s == 1.0 {
        return Ok(s);
    }
    let x = (s / (1.0 - s)).ln();
    let y = a.apply(x);
    Ok(1.0 / (1.0 + (-y).exp()))
}

/// Action on the closed unit disk through the radial coordinate; the center
/// and the boundary sphere are fixed.
pub fn disk_action(a: &CoverElement, y: &DVector<f64>) -> Result<DVector<f64>> {
    let r = y.norm();
    if r > 1.0 {
        return Err(LieError::InvalidInput(format!(
            "|y| = {r} is outside the disk"
        )));
    }
    if r == 0.0 || r == 1.0 {
        return Ok(y.clone());
    }
    let r2 = interval_action(a, r)?;
    Ok(y * (r2 / r))
}

/// The lifted action on the line itself.
pub struct LineAction;
/// [`interval_action`] as an [`Action`].
pub struct IntervalAction;
/// [`disk_action`] as an [`Action`].
pub struct DiskAction;

macro_rules! cover_group {
    () => {
        type Element = CoverElement;

        fn compose(&self, g: &CoverElement, h: &CoverElement) -> CoverElement {
            cover_compose(g, h)
        }

        fn identity(&self) -> CoverElement {
            CoverElement::identity()
        }
    };
}

impl Action for LineAction {
    type Point = f64;
    cover_group!();

    fn act(&self, g: &CoverElement, y: &f64) -> Result<f64> {
        Ok(g.apply(*y))
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }
}

impl Action for IntervalAction {
    type Point = f64;
    cover_group!();

    fn act(&self, g: &CoverElement, y: &f64) -> Result<f64> {
        interval_action(g, *y)
    }

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }
}

impl Action for DiskAction {
    type Point = DVector<f64>;
    cover_group!();

    fn act(&self, g: &CoverElement, y: &DVector<f64>) -> Result<DVector<f64>> {
        disk_action(g, y)
    }

    fn distance(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a - b).amax()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_sl2, sample_rng};

    fn random_element(seed: u64, i: u64) -> CoverElement {
        let mut rng = sample_rng(seed, 0, i);
        let a = random_sl2(&mut rng);
        let k = rand::Rng::gen_range(&mut rng, -2..=2);
        CoverElement::from_dmatrix(&a, k).unwrap()
    }

    #[test]
    fn deck_translations_compose() {
        let c = cover_compose(&CoverElement::deck(1), &CoverElement::deck(1));
        assert_eq!(c.k, 2);
        assert!((c.apply(0.3) - (0.3 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn inverse_composes_to_identity() {
        for i in 0..50 {
            let a = random_element(1, i);
            let c = cover_compose(&a, &a.inverse());
            for theta in [-2.0, 0.0, 0.7, 5.0] {
                assert!(
                    (c.apply(theta) - theta).abs() < 1e-9,
                    "{i} {theta} {} {:?}",
                    c.apply(theta),
                    c
                );
            }
        }
    }

    #[test]
    fn lift_agrees_with_branch_tracking() {
        for i in 0..50 {
            let a = random_element(2, i).a;
            for theta in [0.0, 0.4, 2.0, 3.5, 7.0, -1.2] {
                let tracked = lift_tracked(&a, theta, 1024);
                assert!((CoverElement::base_lift(&a, theta) - tracked).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn lift_is_normalized_and_equivariant() {
        for i in 0..50 {
            let e = random_element(3, i);
            let f0 = CoverElement::base_lift(&e.a, 0.0);
            assert!((0.0..PI).contains(&f0));
            for s in 0..10 {
                let th = -5.0 + s as f64;
                assert!((e.apply(th + PI) - e.apply(th) - PI).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn interval_endpoints_and_identity() {
        let a = random_element(4, 0);
        assert_eq!(interval_action(&a, 0.0).unwrap(), 0.0);
        assert_eq!(interval_action(&a, 1.0).unwrap(), 1.0);
        assert!(interval_action(&a, 1.5).is_err());
        let id = CoverElement::identity();
        for s in [0.1, 0.5, 0.9] {
            assert!((interval_action(&id, s).unwrap() - s).abs() < 1e-15);
        }
        let rot = CoverElement::rotation(0.5);
        assert!((interval_action(&rot, 0.5).unwrap() - 0.5).abs() > 1e-3);
    }

    #[test]
    fn disk_boundary_fixed() {
        let a = CoverElement::rotation(1.0);
        let y = DVector::from_vec(vec![0.6, 0.8]);
        assert_eq!(disk_action(&a, &y).unwrap(), y);
        let inner = DVector::from_vec(vec![0.3, 0.4]);
        assert!((disk_action(&a, &inner).unwrap() - &inner).amax() > 1e-3);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(CoverElement::new(Matrix2::new(2.0, 0.0, 0.0, 1.0), 0).is_err());
    }
}
