//! JSON interchange format for structure constants.
//!
//! ```json
//! {"name": "h3", "dim": 3, "basis": ["e1", "e2", "e3"],
//!  "brackets": [{"i": 1, "j": 2, "result": {"3": "1/1"}}]}
//! ```
//!
//! Indices are 1-based, only `i < j` may appear, omitted pairs bracket to
//! zero, and coefficients are `"p/q"` strings.

use std::collections::{BTreeMap, HashSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{LieError, Result};
use crate::lie::LieAlgebra;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub result: BTreeMap<String, String>,
}

impl AlgebraDocument {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let brackets = g
            .nonzero_brackets()
            .into_iter()
            .map(|((i, j), v)| BracketEntry {
                i: i + 1,
                j: j + 1,
                result: v
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| !q.is_zero())
                    .map(|(k, q)| ((k + 1).to_string(), format_rational(q)))
                    .collect(),
            })
            .collect();
        AlgebraDocument {
            name: g.name().to_string(),
            dim: g.dim(),
            basis: g.basis_names().to_vec(),
            brackets,
        }
    }

    /// Validates indices and rationals, then builds the algebra. Jacobi
    /// failures surface as [`LieError::JacobiViolation`].
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let (name, basis, brackets) = self.validated()?;
        LieAlgebra::new(name, basis, brackets)
    }

    /// Like [`AlgebraDocument::to_algebra`] without the Jacobi check.
    pub fn to_algebra_unchecked(&self) -> Result<LieAlgebra> {
        let (name, basis, brackets) = self.validated()?;
        LieAlgebra::new_unchecked(name, basis, brackets)
    }

    #[allow(clippy::type_complexity)]
    fn validated(&self) -> Result<(String, Vec<String>, Vec<((usize, usize), Vec<Rational>)>)> {
        let n = self.dim;
        if self.basis.len() != n {
            return Err(LieError::InvalidInput(format!(
                "basis has {} labels but dim is {n}",
                self.basis.len()
            )));
        }
        let mut seen = HashSet::new();
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(LieError::InvalidInput(format!(
                    "bracket ({}, {}) out of range 1..={n}",
                    b.i, b.j
                )));
            }
            if b.i >= b.j {
                return Err(LieError::InvalidInput(format!(
                    "bracket ({}, {}) must have i < j",
                    b.i, b.j
                )));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(LieError::InvalidInput(format!(
                    "bracket ({}, {}) listed twice",
                    b.i, b.j
                )));
            }
            let mut v = vec![Rational::zero(); n];
            for (k, q) in &b.result {
                let k: usize = k
                    .parse()
                    .map_err(|_| LieError::InvalidInput(format!("bad result index {k:?}")))?;
                if k == 0 || k > n {
                    return Err(LieError::InvalidInput(format!(
                        "result index {k} out of range 1..={n}"
                    )));
                }
                v[k - 1] = parse_rational(q)?;
            }
            brackets.push(((b.i - 1, b.j - 1), v));
        }
        Ok((self.name.clone(), self.basis.clone(), brackets))
    }
}

pub fn parse_algebra_json(text: &str) -> Result<LieAlgebra> {
    let doc: AlgebraDocument = serde_json::from_str(text)
        .map_err(|e| LieError::InvalidInput(format!("algebra JSON: {e}")))?;
    doc.to_algebra()
}

pub fn algebra_to_json(g: &LieAlgebra) -> String {
    serde_json::to_string_pretty(&AlgebraDocument::from_algebra(g)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, standard_catalog};

    #[test]
    fn round_trip_catalog() {
        for name in standard_catalog() {
            let g = catalog(&name).unwrap();
            let back = parse_algebra_json(&algebra_to_json(&g)).unwrap();
            assert_eq!(back, g, "{name}");
        }
    }

    fn doc(brackets: &str) -> String {
        format!(r#"{{"name":"x","dim":3,"basis":["a","b","c"],"brackets":{brackets}}}"#)
    }

    #[test]
    fn rejects_bad_documents() {
        let cases = [
            r#"[{"i":2,"j":1,"result":{"3":"1/1"}}]"#,
            r#"[{"i":1,"j":1,"result":{}}]"#,
            r#"[{"i":1,"j":4,"result":{}}]"#,
            r#"[{"i":0,"j":2,"result":{}}]"#,
            r#"[{"i":1,"j":2,"result":{"4":"1"}}]"#,
            r#"[{"i":1,"j":2,"result":{"3":"1/0"}}]"#,
            r#"[{"i":1,"j":2,"result":{"3":"x"}}]"#,
            r#"[{"i":1,"j":2,"result":{"3":"1"}},{"i":1,"j":2,"result":{"3":"1"}}]"#,
        ];
        for c in cases {
            assert!(parse_algebra_json(&doc(c)).is_err(), "{c}");
        }
    }

    #[test]
    fn jacobi_failure_is_reported() {
        let text = doc(r#"[{"i":1,"j":2,"result":{"3":"1"}},{"i":1,"j":3,"result":{"1":"1"}}]"#);
        assert!(matches!(
            parse_algebra_json(&text),
            Err(LieError::JacobiViolation(_))
        ));
    }
}
