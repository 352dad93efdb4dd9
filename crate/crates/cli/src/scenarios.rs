//! Scenario files for `act verify` and `vf verify|flow`, plus built-in
//! scenarios addressed as `builtin:NAME`.
//!
//! Action scenario (one of the `kind`s below):
//!
//! ```json
//! {"kind": "ball", "group": "st", "n": 3, "r0": 0.25, "r1": 0.75,
//!  "center": [0, 0, 0], "radius": 1.0, "samples": 200, "tolerance": 1e-6}
//! ```
//!
//! Vector-field scenario; polynomials are maps from monomials such as
//! `x1^2*x2` to rational strings, and univariate `u_j` are coefficient lists
//! in increasing degree:
//!
//! ```json
//! {"kind": "commuting_family", "f": {"x1^2": "1", "x2^2": "1"},
//!  "u": [["1"], ["0", "1"]], "points": [[0.5, 0.2]], "times": [[0.3, 0.3]],
//!  "step": 0.001}
//! ```

use liedeform_core::vector_fields::{
    hamiltonian_field, PolyDocument, PolyVectorField, UnivariateDocument,
};
use serde::Deserialize;

use crate::{read_file, CliError, CliResult};

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActScenario {
    /// Linear action on the unit sphere.
    Sphere {
        group: String,
        n: usize,
        samples: Option<usize>,
        tolerance: Option<f64>,
    },
    /// Suspension of a contraction transferred radially to `R^n`.
    Suspension {
        group: String,
        n: usize,
        samples: Option<usize>,
        tolerance: Option<f64>,
    },
    Ball {
        group: String,
        n: usize,
        #[serde(default = "default_r0")]
        r0: f64,
        #[serde(default = "default_r1")]
        r1: f64,
        center: Option<Vec<f64>>,
        #[serde(default = "default_radius")]
        radius: f64,
        samples: Option<usize>,
        tolerance: Option<f64>,
    },
    Multiball {
        group: String,
        n: usize,
        #[serde(default = "default_r0")]
        r0: f64,
        #[serde(default = "default_r1")]
        r1: f64,
        balls: Vec<BallSpec>,
        samples: Option<usize>,
        tolerance: Option<f64>,
    },
    /// Lifted projective action of `SL(2)` on the line, interval or disk.
    Cover {
        space: CoverSpace,
        samples: Option<usize>,
        tolerance: Option<f64>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallSpec {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverSpace {
    Line,
    Interval,
    Disk,
}

fn default_r0() -> f64 {
    0.25
}

fn default_r1() -> f64 {
    0.75
}

fn default_radius() -> f64 {
    1.0
}

/// A field given by its components or as the Hamiltonian field of a
/// function of two variables.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Hamiltonian { hamiltonian: PolyDocument },
    Components(Vec<PolyDocument>),
}

impl FieldSpec {
    pub fn build(&self, n: usize) -> CliResult<PolyVectorField> {
        match self {
            FieldSpec::Hamiltonian { hamiltonian } => {
                Ok(hamiltonian_field(&hamiltonian.to_poly(n)?)?)
            }
            FieldSpec::Components(cs) => {
                if cs.len() != n {
                    return Err(CliError::input(format!(
                        "field has {} components but n = {n}",
                        cs.len()
                    )));
                }
                let comps = cs.iter().map(|c| c.to_poly(n)).collect::<Result<_, _>>()?;
                Ok(PolyVectorField::new(comps)?)
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VfScenario {
    /// `L_j = u_j(f) X` with `X` the Hamiltonian field of `f` unless given.
    CommutingFamily {
        #[serde(default = "default_vars")]
        n: usize,
        f: PolyDocument,
        field: Option<FieldSpec>,
        u: Vec<UnivariateDocument>,
        points: Vec<Vec<f64>>,
        times: Vec<[f64; 2]>,
        step: f64,
        commutation_tolerance: Option<f64>,
        level_tolerance: Option<f64>,
    },
    /// `sl(n+1)` acting on the affine chart `R^n`.
    Projective {
        n: usize,
        /// Random points in `[-2, 2]^n` for the orbit-dimension survey.
        samples: Option<usize>,
    },
    Flow {
        #[serde(default = "default_vars")]
        n: usize,
        field: FieldSpec,
        point: Vec<f64>,
        duration: f64,
        step: f64,
        level: Option<PolyDocument>,
        level_tolerance: Option<f64>,
    },
}

fn default_vars() -> usize {
    2
}

/// `(name, command, JSON)`.
pub const BUILTIN: &[(&str, &str, &str)] = &[
    (
        "sphere-st3",
        "act verify",
        r#"{"kind": "sphere", "group": "st", "n": 3}"#,
    ),
    (
        "suspension-st3",
        "act verify",
        r#"{"kind": "suspension", "group": "st", "n": 3}"#,
    ),
    (
        "suspension-u3",
        "act verify",
        r#"{"kind": "suspension", "group": "u", "n": 3}"#,
    ),
    (
        "ball-st3",
        "act verify",
        r#"{"kind": "ball", "group": "st", "n": 3}"#,
    ),
    (
        "ball-u3",
        "act verify",
        r#"{"kind": "ball", "group": "u", "n": 3}"#,
    ),
    (
        "multiball-st3",
        "act verify",
        r#"{"kind": "multiball", "group": "st", "n": 3, "balls": [
            {"center": [0, 0, 0], "radius": 1},
            {"center": [3, 0, 0], "radius": 1},
            {"center": [0, 3, 0], "radius": 1.5}]}"#,
    ),
    (
        "multiball-u3",
        "act verify",
        r#"{"kind": "multiball", "group": "u", "n": 3, "balls": [
            {"center": [0, 0, 0], "radius": 1},
            {"center": [3, 0, 0], "radius": 1},
            {"center": [0, 3, 0], "radius": 1.5}]}"#,
    ),
    (
        "cover-line",
        "act verify",
        r#"{"kind": "cover", "space": "line"}"#,
    ),
    (
        "cover-interval",
        "act verify",
        r#"{"kind": "cover", "space": "interval"}"#,
    ),
    (
        "cover-disk",
        "act verify",
        r#"{"kind": "cover", "space": "disk"}"#,
    ),
    (
        "commuting4",
        "vf verify",
        r#"{"kind": "commuting_family", "f": {"x1^2": "1", "x2^2": "1"},
            "u": [["1"], ["0", "1"], ["0", "0", "1"], ["0", "0", "0", "1"]],
            "points": [[0.5, 0.2], [0.9, -0.3], [-0.4, 0.6], [0.1, -0.8]],
            "times": [[0.3, 0.3], [-0.5, 0.5], [0.5, -0.2], [-0.4, -0.5]],
            "step": 0.001}"#,
    ),
    (
        "halfplane",
        "vf verify",
        r#"{"kind": "commuting_family", "f": {"x1^2": "1", "x1*x2": "1"},
            "u": [["1"], ["1", "1"]],
            "points": [[0.5, 0.2], [0.3, -0.4]],
            "times": [[0.2, 0.2], [-0.3, 0.1]],
            "step": 0.001}"#,
    ),
    (
        "projective1",
        "vf verify",
        r#"{"kind": "projective", "n": 1}"#,
    ),
    (
        "projective2",
        "vf verify",
        r#"{"kind": "projective", "n": 2}"#,
    ),
    (
        "projective3",
        "vf verify",
        r#"{"kind": "projective", "n": 3}"#,
    ),
    (
        "rotation",
        "vf flow",
        r#"{"kind": "flow", "field": {"hamiltonian": {"x1^2": "1", "x2^2": "1"}},
            "point": [1, 0], "duration": 1.5707963267948966, "step": 0.001,
            "level": {"x1^2": "1", "x2^2": "1"}}"#,
    ),
];

fn builtin_text(name: &str, command: &str) -> CliResult<&'static str> {
    BUILTIN
        .iter()
        .find(|(n, c, _)| *n == name && c.starts_with(command))
        .map(|(_, _, t)| *t)
        .ok_or_else(|| CliError::input(format!("unknown built-in {command} scenario {name:?}")))
}

fn source_text(source: &str, command: &str) -> CliResult<(String, String)> {
    match source.strip_prefix("builtin:") {
        Some(name) => Ok((builtin_text(name, command)?.to_string(), source.to_string())),
        None => Ok((read_file(source)?, source.to_string())),
    }
}

pub fn load_act(source: &str) -> CliResult<ActScenario> {
    let (text, origin) = source_text(source, "act")?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{origin}: malformed action scenario: {e}")))
}

pub fn load_vf(source: &str) -> CliResult<VfScenario> {
    let (text, origin) = source_text(source, "vf")?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{origin}: malformed vector-field scenario: {e}")))
}
