use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::verify::Action;
use crate::contractions::{GroupDeformation, GroupTag};
use crate::error::{LieError, Result};

const SINGULAR_TOL: f64 = 1e-300;

/// `g . x = gx / |gx|` on the unit sphere.
pub fn sphere_action(g: &DMatrix<f64>, x: &DVector<f64>) -> Result<DVector<f64>> {
    if g.ncols() != x.len() || !g.is_square() {
        return Err(LieError::mismatch(g.ncols(), x.len()));
    }
    let y = g * x;
    let norm = y.norm();
    if !norm.is_finite() || norm <= SINGULAR_TOL {
        return Err(LieError::Singular);
    }
    Ok(y / norm)
}

/// [`sphere_action`] of `GL(n)` as an [`Action`].
#[derive(Clone, Copy, Debug)]
pub struct SphereAction(pub usize);

impl Action for SphereAction {
    type Element = DMatrix<f64>;
    type Point = DVector<f64>;

    fn act(&self, g: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        sphere_action(g, y)
    }

    fn compose(&self, g: &DMatrix<f64>, h: &DMatrix<f64>) -> DMatrix<f64> {
        g * h
    }

    fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.0, self.0)
    }

    fn distance(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a - b).amax()
    }
}

/// Acts on the level `t` of the cylinder through `Lambda_t(g)`.
pub fn suspension_act(
    deformation: &GroupDeformation,
    g: &DMatrix<f64>,
    x: &DVector<f64>,
    t: f64,
) -> Result<(DVector<f64>, f64)> {
    let gt = deformation.apply(t, g);
    Ok((sphere_action(&gt, x)?, t))
}

/// `(x, t) -> e^{-t} x`.
pub fn cylinder_transfer(x: &DVector<f64>, t: f64) -> DVector<f64> {
    x * (-t).exp()
}

/// `y -> (y/|y|, -ln|y|)`.
pub fn cylinder_transfer_inverse(y: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let r = y.norm();
    if r == 0.0 {
        return Err(LieError::InvalidInput(
            "the origin has no cylinder coordinates".into(),
        ));
    }
    Ok((y / r, -r.ln()))
}

/// The suspension of a Lie contraction transferred to `R^n` by
/// `(x, t) -> e^{-t} x`, with the origin fixed. It is the identity on
/// `|y| <= e^{-1}` (where the contraction is trivial) and the full sphere
/// action on every ray for `|y| >= 1`; it is therefore not compactly
/// supported.
#[derive(Clone, Debug)]
pub struct SuspensionAction {
    pub contraction: GroupDeformation,
}

impl Action for SuspensionAction {
    type Element = DMatrix<f64>;
    type Point = DVector<f64>;

    fn act(&self, g: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if y.norm() == 0.0 {
            return Ok(y.clone());
        }
        let (x, t) = cylinder_transfer_inverse(y)?;
        let (x2, t2) = suspension_act(&self.contraction, g, &x, t)?;
        Ok(cylinder_transfer(&x2, t2))
    }

    fn compose(&self, g: &DMatrix<f64>, h: &DMatrix<f64>) -> DMatrix<f64> {
        g * h
    }

    fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.contraction.n, self.contraction.n)
    }

    fn distance(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a - b).amax()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BallVariant {
    /// Bump deformation on an annulus; identity outside the ball.
    Compact,
}

/// Action supported in the annulus `r0 R < |y - c| < r1 R` of the ball of
/// radius `R` about `c`.
///
/// A point at relative radius `r` sits on level
/// `t = ln(r1 / r) / ln(r1 / r0)` of the suspension, so `t` runs from 0 at
/// the outer radius to 1 at the inner one. Directions are moved by the
/// sphere action of `Lambda_t(g)`; radii are preserved. The bump family is
/// trivial for `t` outside `(0, 1)`, which makes the map the identity off
/// the annulus.
#[derive(Clone, Debug)]
pub struct BallAction {
    pub deformation: GroupDeformation,
    pub r0: f64,
    pub r1: f64,
    pub center: DVector<f64>,
    pub radius: f64,
    pub variant: BallVariant,
}

impl BallAction {
    pub fn new(
        deformation: GroupDeformation,
        r0: f64,
        r1: f64,
        center: DVector<f64>,
        radius: f64,
    ) -> Result<Self> {
        if !(0.0 < r0 && r0 < r1 && r1 <= 1.0) {
            return Err(LieError::InvalidInput(format!(
                "annulus radii must satisfy 0 < r0 < r1 <= 1, got {r0}, {r1}"
            )));
        }
        if radius.is_nan() || radius <= 0.0 {
            return Err(LieError::InvalidInput(
                "ball radius must be positive".into(),
            ));
        }
        if center.len() != deformation.n {
            return Err(LieError::mismatch(deformation.n, center.len()));
        }
        Ok(BallAction {
            deformation,
            r0,
            r1,
            center,
            radius,
            variant: BallVariant::Compact,
        })
    }

    pub fn n(&self) -> usize {
        self.deformation.n
    }

    pub fn group(&self) -> GroupTag {
        self.deformation.group
    }

    /// True on the open annulus where the action may move points.
    pub fn in_support(&self, y: &DVector<f64>) -> bool {
        let r = (y - &self.center).norm() / self.radius;
        r > self.r0 && r < self.r1
    }

    pub fn in_ball(&self, y: &DVector<f64>) -> bool {
        (y - &self.center).norm() < self.radius
    }

    /// Suspension level of a relative radius inside the annulus.
    pub fn level(&self, r: f64) -> f64 {
        (self.r1 / r).ln() / (self.r1 / self.r0).ln()
    }

    pub fn act_on(&self, g: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if g.nrows() != self.n() || y.len() != self.n() {
            return Err(LieError::mismatch(self.n(), y.len().min(g.nrows())));
        }
        if !self.in_support(y) {
            return Ok(y.clone());
        }
        let offset = y - &self.center;
        let rho = offset.norm();
        let t = self.level(rho / self.radius);
        let x = &offset / rho;
        let (x2, _) = suspension_act(&self.deformation, g, &x, t)?;
        Ok(&self.center + x2 * rho)
    }
}

impl Action for BallAction {
    type Element = DMatrix<f64>;
    type Point = DVector<f64>;

    fn act(&self, g: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        self.act_on(g, y)
    }

    fn compose(&self, g: &DMatrix<f64>, h: &DMatrix<f64>) -> DMatrix<f64> {
        g * h
    }

    fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.n(), self.n())
    }

    fn distance(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a - b).amax()
    }
}

/// Product group acting factor by factor in pairwise disjoint balls.
#[derive(Clone, Debug)]
pub struct MultiBallAction {
    pub balls: Vec<BallAction>,
}

impl MultiBallAction {
    pub fn new(balls: Vec<BallAction>) -> Result<Self> {
        for (a, ba) in balls.iter().enumerate() {
            for bb in &balls[a + 1..] {
                if ba.n() != bb.n() {
                    return Err(LieError::mismatch(ba.n(), bb.n()));
                }
                let d = (&ba.center - &bb.center).norm();
                if d <= ba.radius + bb.radius {
                    return Err(LieError::InvalidInput(format!(
                        "balls overlap: center distance {d} <= radius sum {}",
                        ba.radius + bb.radius
                    )));
                }
            }
        }
        Ok(MultiBallAction { balls })
    }

    pub fn n(&self) -> usize {
        self.balls.first().map_or(0, BallAction::n)
    }
}

impl Action for MultiBallAction {
    type Element = Vec<DMatrix<f64>>;
    type Point = DVector<f64>;

    fn act(&self, g: &Vec<DMatrix<f64>>, y: &DVector<f64>) -> Result<DVector<f64>> {
        if g.len() != self.balls.len() {
            return Err(LieError::mismatch(self.balls.len(), g.len()));
        }
        for (ball, gj) in self.balls.iter().zip(g) {
            if ball.in_ball(y) {
                return ball.act_on(gj, y);
            }
        }
        Ok(y.clone())
    }

    fn compose(&self, g: &Vec<DMatrix<f64>>, h: &Vec<DMatrix<f64>>) -> Vec<DMatrix<f64>> {
        g.iter().zip(h).map(|(a, b)| a * b).collect()
    }

    fn identity(&self) -> Vec<DMatrix<f64>> {
        let n = self.n();
        vec![DMatrix::identity(n, n); self.balls.len()]
    }

    fn distance(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (a - b).amax()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contractions::{bump_group_deformation, group_contraction_st};
    use crate::sampling::{random_st, random_unit_vector, sample_rng};

    #[test]
    fn sphere_examples() {
        let x = DVector::from_vec(vec![1.0, 0.0]);
        let id = DMatrix::identity(2, 2);
        assert_eq!(sphere_action(&id, &x).unwrap(), x);
        let d = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        assert_eq!(sphere_action(&d, &x).unwrap(), x);
        assert!(sphere_action(&DMatrix::zeros(2, 2), &x).is_err());
    }

    #[test]
    fn sphere_composition() {
        let mut worst: f64 = 0.0;
        for s in 0..100 {
            let mut rng = sample_rng(3, 0, s);
            let g = random_st(&mut rng, 3);
            let h = random_st(&mut rng, 3);
            let x = random_unit_vector(&mut rng, 3);
            let lhs = sphere_action(&(&g * &h), &x).unwrap();
            let rhs = sphere_action(&g, &sphere_action(&h, &x).unwrap()).unwrap();
            worst = worst.max((lhs - rhs).amax());
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn transfer_examples() {
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        assert_eq!(cylinder_transfer(&e1, 0.0), e1);
        assert_eq!(cylinder_transfer(&e1, 1.0), &e1 * (-1.0f64).exp());
        assert!(cylinder_transfer_inverse(&DVector::zeros(3)).is_err());
        for s in 0..100 {
            let mut rng = sample_rng(4, 0, s);
            let x = random_unit_vector(&mut rng, 3);
            let t: f64 = rand::Rng::gen_range(&mut rng, -3.0..3.0);
            let (x2, t2) = cylinder_transfer_inverse(&cylinder_transfer(&x, t)).unwrap();
            assert!((x2 - &x).amax() <= 1e-12 && (t2 - t).abs() <= 1e-12);
        }
    }

    #[test]
    fn suspension_levels() {
        let c = group_contraction_st(3).unwrap();
        let mut rng = sample_rng(8, 0, 0);
        let g = random_st(&mut rng, 3);
        let x = random_unit_vector(&mut rng, 3);
        let (y, t) = suspension_act(&c, &g, &x, -1.0).unwrap();
        assert_eq!(t, -1.0);
        assert_eq!(y, sphere_action(&g, &x).unwrap());
        let (y, _) = suspension_act(&c, &g, &x, 2.0).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn suspension_is_identity_near_origin_only() {
        let a = SuspensionAction {
            contraction: group_contraction_st(3).unwrap(),
        };
        let mut g = DMatrix::identity(3, 3);
        g[(0, 1)] = 1.0;
        let near = DVector::from_vec(vec![0.0, 0.2, 0.0]);
        assert_eq!(a.act(&g, &near).unwrap(), near);
        let far = DVector::from_vec(vec![0.0, 2.0, 0.0]);
        assert!((a.act(&g, &far).unwrap() - far).amax() > 0.1);
    }

    #[test]
    fn ball_is_identity_outside_annulus() {
        let b = BallAction::new(
            bump_group_deformation(GroupTag::StCirc, 3).unwrap(),
            0.25,
            0.75,
            DVector::zeros(3),
            1.0,
        )
        .unwrap();
        let mut rng = sample_rng(9, 0, 0);
        let g = random_st(&mut rng, 3);
        for y in [
            DVector::from_vec(vec![0.0, 0.0, 0.9]),
            DVector::from_vec(vec![0.1, 0.0, 0.0]),
            DVector::from_vec(vec![3.0, 1.0, 0.0]),
        ] {
            assert_eq!(b.act_on(&g, &y).unwrap(), y);
        }
    }

    #[test]
    fn ball_rejects_bad_radii() {
        let d = bump_group_deformation(GroupTag::Unipotent, 3).unwrap();
        assert!(BallAction::new(d.clone(), 0.5, 0.25, DVector::zeros(3), 1.0).is_err());
        assert!(BallAction::new(d, 0.25, 0.5, DVector::zeros(2), 1.0).is_err());
    }

    #[test]
    fn overlapping_balls_rejected() {
        let d = bump_group_deformation(GroupTag::Unipotent, 3).unwrap();
        let ball = |x: f64| {
            BallAction::new(
                d.clone(),
                0.2,
                0.8,
                DVector::from_vec(vec![x, 0.0, 0.0]),
                1.0,
            )
            .unwrap()
        };
        assert!(MultiBallAction::new(vec![ball(0.0), ball(1.5)]).is_err());
        assert!(MultiBallAction::new(vec![ball(0.0), ball(2.5)]).is_ok());
    }
}
