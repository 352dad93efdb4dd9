use nalgebra::DMatrix;
use serde::Serialize;

use super::profile::TransitionProfile;
use crate::error::{LieError, Result};
use crate::sampling::{random_st, random_unipotent, sample_rng};

/// Matrix group a deformation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    /// Upper triangular, positive diagonal, determinant one.
    StCirc,
    /// Unipotent upper triangular.
    Unipotent,
}

impl GroupTag {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "st" | "st_circ" => Ok(GroupTag::StCirc),
            "u" | "unipotent" => Ok(GroupTag::Unipotent),
            _ => Err(LieError::InvalidInput(format!("unknown group tag {s:?}"))),
        }
    }

    pub fn sample(self, rng: &mut impl rand::Rng, n: usize) -> DMatrix<f64> {
        match self {
            GroupTag::StCirc => random_st(rng, n),
            GroupTag::Unipotent => random_unipotent(rng, n),
        }
    }

    /// One-parameter generators: `exp` of the traceless diagonal basis (for
    /// `StCirc`) and `I + T(ij)` for `i < j`.
    pub fn generators(self, n: usize) -> Vec<DMatrix<f64>> {
        let mut gens = Vec::new();
        if self == GroupTag::StCirc {
            for i in 0..n - 1 {
                let mut g = DMatrix::identity(n, n);
                g[(i, i)] = std::f64::consts::E;
                g[(i + 1, i + 1)] = 1.0 / std::f64::consts::E;
                gens.push(g);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let mut g = DMatrix::identity(n, n);
                g[(i, j)] = 1.0;
                gens.push(g);
            }
        }
        gens
    }
}

/// What a stage does at level `lambda` in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageMap {
    /// Entry `(i, j)` scaled by `lambda^{j-i}`; diagonal kept. For
    /// `lambda > 0` this is conjugation by `diag(lambda^{-i})`, and at
    /// `lambda = 0` it is the diagonal projection.
    OffDiagonalScaling,
    /// Diagonal projection followed by `d -> d^lambda` entrywise.
    DiagonalPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub start: f64,
    pub end: f64,
    pub map: StageMap,
    /// Level runs 0 -> 1 when rising, 1 -> 0 otherwise.
    pub rising: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Identity,
    /// Constant map onto the identity matrix.
    Trivial,
}

/// Piecewise family of group endomorphisms `Theta_t`. Before the first
/// stage it equals `before`; after the last stage, `after`; between stages
/// it holds the value reached at the end of the preceding stage.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupDeformation {
    pub name: String,
    pub n: usize,
    pub group: GroupTag,
    pub profile: TransitionProfile,
    pub before: Endpoint,
    pub stages: Vec<Stage>,
    pub after: Endpoint,
}

impl GroupDeformation {
    fn level(&self, stage: &Stage, t: f64) -> f64 {
        let tau = ((t - stage.start) / (stage.end - stage.start)).clamp(0.0, 1.0);
        if stage.rising {
            self.profile.rising(tau)
        } else {
            self.profile.eval(tau)
        }
    }

    fn endpoint(&self, e: Endpoint, g: &DMatrix<f64>) -> DMatrix<f64> {
        match e {
            Endpoint::Identity => g.clone(),
            Endpoint::Trivial => DMatrix::identity(self.n, self.n),
        }
    }

    pub fn apply(&self, t: f64, g: &DMatrix<f64>) -> DMatrix<f64> {
        let (Some(first), Some(last)) = (self.stages.first(), self.stages.last()) else {
            return self.endpoint(self.before, g);
        };
        if t <= first.start {
            return self.endpoint(self.before, g);
        }
        if t >= last.end {
            return self.endpoint(self.after, g);
        }
        let stage = self
            .stages
            .iter()
            .rev()
            .find(|s| s.start <= t)
            .expect("t is past the first stage start");
        let lambda = self.level(stage, t);
        apply_stage(stage.map, lambda, g)
    }
}

fn apply_stage(map: StageMap, lambda: f64, g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let mut out = DMatrix::zeros(n, n);
    match map {
        StageMap::OffDiagonalScaling => {
            for i in 0..n {
                out[(i, i)] = g[(i, i)];
                for j in i + 1..n {
                    if g[(i, j)] != 0.0 {
                        out[(i, j)] = g[(i, j)] * lambda.powi((j - i) as i32);
                    }
                }
            }
        }
        StageMap::DiagonalPower => {
            for i in 0..n {
                out[(i, i)] = g[(i, i)].powf(lambda);
            }
        }
    }
    out
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(LieError::InvalidInput(
            "group deformations need n >= 2".into(),
        ));
    }
    Ok(())
}

/// Lie contraction of `ST∘(n)`: off-diagonal entries fade on `[0, 1/2]`,
/// then the diagonal is raised to a power falling from 1 to 0 on `[1/2, 1]`.
pub fn group_contraction_st(n: usize) -> Result<GroupDeformation> {
    check_n(n)?;
    Ok(GroupDeformation {
        name: format!("st_contraction_{n}"),
        n,
        group: GroupTag::StCirc,
        profile: TransitionProfile::FlatExponential,
        before: Endpoint::Identity,
        stages: vec![
            Stage {
                start: 0.0,
                end: 0.5,
                map: StageMap::OffDiagonalScaling,
                rising: false,
            },
            Stage {
                start: 0.5,
                end: 1.0,
                map: StageMap::DiagonalPower,
                rising: false,
            },
        ],
        after: Endpoint::Trivial,
    })
}

/// Lie contraction of the unipotent group by off-diagonal fading.
pub fn group_contraction_unipotent(n: usize) -> Result<GroupDeformation> {
    check_n(n)?;
    Ok(GroupDeformation {
        name: format!("unipotent_contraction_{n}"),
        n,
        group: GroupTag::Unipotent,
        profile: TransitionProfile::FlatExponential,
        before: Endpoint::Identity,
        stages: vec![Stage {
            start: 0.0,
            end: 1.0,
            map: StageMap::OffDiagonalScaling,
            rising: false,
        }],
        after: Endpoint::Trivial,
    })
}

/// Family that is trivial for `t` outside `(0, 1)` and the identity on
/// `[0.4, 0.6]`.
pub fn bump_group_deformation(group: GroupTag, n: usize) -> Result<GroupDeformation> {
    check_n(n)?;
    let stage = |start: f64, end: f64, map, rising| Stage {
        start,
        end,
        map,
        rising,
    };
    let stages = match group {
        GroupTag::Unipotent => vec![
            stage(0.0, 0.4, StageMap::OffDiagonalScaling, true),
            stage(0.6, 1.0, StageMap::OffDiagonalScaling, false),
        ],
        GroupTag::StCirc => vec![
            stage(0.0, 0.2, StageMap::DiagonalPower, true),
            stage(0.2, 0.4, StageMap::OffDiagonalScaling, true),
            stage(0.6, 0.8, StageMap::OffDiagonalScaling, false),
            stage(0.8, 1.0, StageMap::DiagonalPower, false),
        ],
    };
    Ok(GroupDeformation {
        name: format!("bump_{n}"),
        n,
        group,
        profile: TransitionProfile::FlatExponential,
        before: Endpoint::Trivial,
        stages,
        after: Endpoint::Trivial,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupReport {
    pub name: String,
    pub homomorphism_residual: f64,
    /// Largest `|det - 1|`.
    pub determinant_residual: f64,
    /// Largest absolute strictly-lower entry.
    pub triangularity_residual: f64,
    pub positive_diagonal: bool,
    /// Largest jump across stage boundaries, evaluated from both sides.
    pub continuity_residual: f64,
    pub samples: usize,
    pub seed: u64,
}

impl GroupReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.homomorphism_residual <= tol
            && self.determinant_residual <= tol
            && self.triangularity_residual <= tol
            && self.positive_diagonal
            && self.continuity_residual <= tol
    }
}

/// Samples `(g, h, t)` with `t` in `[-0.5, 1.5]` and checks the
/// homomorphism law and preservation of the group.
pub fn verify_group_deformation(d: &GroupDeformation, samples: usize, seed: u64) -> GroupReport {
    let n = d.n;
    let mut hom: f64 = 0.0;
    let mut det: f64 = 0.0;
    let mut tri: f64 = 0.0;
    let mut positive = true;
    for s in 0..samples {
        let mut rng = sample_rng(seed, 21, s as u64);
        let g = d.group.sample(&mut rng, n);
        let h = d.group.sample(&mut rng, n);
        let t: f64 = rand::Rng::gen_range(&mut rng, -0.5..1.5);
        let tg = d.apply(t, &g);
        let th = d.apply(t, &h);
        let tgh = d.apply(t, &(&g * &h));
        hom = hom.max((&tgh - &tg * &th).amax());
        for m in [&tg, &th, &tgh] {
            det = det.max((m.determinant() - 1.0).abs());
            for i in 0..n {
                positive &= m[(i, i)] > 0.0;
                for j in 0..i {
                    tri = tri.max(m[(i, j)].abs());
                }
            }
        }
    }
    let mut rng = sample_rng(seed, 22, 0);
    let probe = d.group.sample(&mut rng, n);
    let mut continuity: f64 = 0.0;
    let eps = 1e-12;
    for st in &d.stages {
        for b in [st.start, st.end] {
            let left = d.apply(b - eps, &probe);
            let right = d.apply(b + eps, &probe);
            continuity = continuity.max((left - right).amax());
        }
    }
    GroupReport {
        name: d.name.clone(),
        homomorphism_residual: hom,
        determinant_residual: det,
        triangularity_residual: tri,
        positive_diagonal: positive,
        continuity_residual: continuity,
        samples,
        seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_endpoints() {
        let d = group_contraction_st(3).unwrap();
        let mut rng = sample_rng(5, 0, 0);
        let g = random_st(&mut rng, 3);
        assert_eq!(d.apply(-1.0, &g), g);
        assert_eq!(d.apply(0.0, &g), g);
        assert_eq!(d.apply(1.0, &g), DMatrix::identity(3, 3));
        assert_eq!(
            d.apply(0.7, &DMatrix::identity(3, 3)),
            DMatrix::identity(3, 3)
        );
    }

    #[test]
    fn bump_support() {
        for tag in [GroupTag::StCirc, GroupTag::Unipotent] {
            let d = bump_group_deformation(tag, 3).unwrap();
            let mut rng = sample_rng(6, 0, 0);
            let g = tag.sample(&mut rng, 3);
            assert_eq!(d.apply(0.5, &g), g);
            assert_eq!(d.apply(-0.5, &g), DMatrix::identity(3, 3));
            assert_eq!(d.apply(1.5, &g), DMatrix::identity(3, 3));
        }
    }

    #[test]
    fn homomorphism_residuals() {
        for d in [
            group_contraction_st(3).unwrap(),
            bump_group_deformation(GroupTag::StCirc, 3).unwrap(),
            bump_group_deformation(GroupTag::Unipotent, 3).unwrap(),
        ] {
            let r = verify_group_deformation(&d, 200, 9);
            assert!(r.passes(1e-9), "{r:?}");
        }
    }

    #[test]
    fn unknown_tag() {
        assert!(GroupTag::parse("so").is_err());
        assert!(group_contraction_st(1).is_err());
    }
}
