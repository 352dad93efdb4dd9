//! Minimum-dimension bounds for effective actions of solvable algebras and
//! the central-kernel degeneracy test in the borderline dimension.
//!
//! For solvable `g` of derived length `l`, an effective action on an
//! `n`-manifold needs `n >= l - 1`, and `n >= l` when `g` is nilpotent. In
//! the borderline dimension, if the last nonzero derived term is central and
//! the center has dimension greater than one, some line in the center acts
//! trivially and every analytic action there is degenerate.

use serde::Serialize;

use crate::error::{LieError, Result};
use crate::lie::{Length, LieAlgebra};
use crate::linalg::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionVerdict {
    /// `n` is below the lower bound.
    Impossible,
    /// `n` is the borderline dimension and the center carries a kernel.
    Degenerate,
    NoVerdict,
}

impl ActionVerdict {
    pub fn label(self) -> &'static str {
        match self {
            ActionVerdict::Impossible => "impossible",
            ActionVerdict::Degenerate => "degenerate",
            ActionVerdict::NoVerdict => "no_verdict",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub verdict: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub algebra: String,
    pub solvable: bool,
    pub nilpotent: bool,
    pub derived_length: Length,
    pub nilpotency_class: Length,
    /// `None` when the algebra is not solvable.
    pub min_effective_dim: Option<usize>,
    /// `g^(l-1)`, present when `l >= 1`.
    pub last_derived_term: Option<Subspace>,
    pub center: Subspace,
    pub last_term_central: bool,
    pub center_dim: usize,
    pub verdicts: Vec<Finding>,
}

/// Lower bound on the dimension of a manifold carrying an effective action:
/// `l` for nilpotent, `l - 1` for solvable non-nilpotent, `None` otherwise.
pub fn min_effective_action_dim(g: &LieAlgebra) -> Option<usize> {
    let Length::Finite(l) = g.derived_length() else {
        return None;
    };
    if g.is_nilpotent() {
        Some(l)
    } else {
        Some(l.saturating_sub(1))
    }
}

/// Report for any algebra; non-solvable input yields a "not applicable"
/// bound and no borderline findings.
pub fn obstruction_report(g: &LieAlgebra) -> ObstructionReport {
    let derived = g.derived_series();
    let nilpotency_class = g.nilpotency_class();
    let nilpotent = nilpotency_class.is_finite();
    let center = g.center();
    let center_dim = center.dim();
    let mut verdicts = Vec::new();

    let (min_dim, last_term) = match derived.length {
        Length::Finite(l) => {
            let bound = if nilpotent { l } else { l.saturating_sub(1) };
            let last = (l >= 1).then(|| derived.terms[l - 1].clone());
            (Some(bound), last)
        }
        Length::Infinite => (None, None),
    };
    let last_term_central = last_term
        .as_ref()
        .map(|t| center.contains_subspace(t).expect("same ambient"))
        .unwrap_or(false);

    match (min_dim, &last_term) {
        (None, _) => verdicts.push(Finding {
            verdict: "not_applicable".into(),
            detail: "algebra is not solvable; no dimension bound applies".into(),
        }),
        (Some(n), Some(_)) if last_term_central && center_dim > 1 => verdicts.push(Finding {
            verdict: ActionVerdict::Degenerate.label().into(),
            detail: format!(
                "every analytic action in the borderline dimension {n} has kernel containing a \
                 1-dimensional central subalgebra; every such action is degenerate"
            ),
        }),
        (Some(_), Some(_)) if last_term_central => verdicts.push(Finding {
            verdict: "no_central_obstruction".into(),
            detail: "last derived term is central and the center is 1-dimensional".into(),
        }),
        _ => {}
    }

    ObstructionReport {
        algebra: g.name().to_string(),
        solvable: derived.length.is_finite(),
        nilpotent,
        derived_length: derived.length,
        nilpotency_class,
        min_effective_dim: min_dim,
        last_derived_term: last_term,
        center,
        last_term_central,
        center_dim,
        verdicts,
    }
}

/// Borderline analysis for solvable algebras.
pub fn borderline_analysis(g: &LieAlgebra) -> Result<ObstructionReport> {
    if !g.is_solvable() {
        return Err(LieError::InvalidInput(format!(
            "{} is not solvable",
            g.name()
        )));
    }
    Ok(obstruction_report(g))
}

pub fn n_action_verdict(g: &LieAlgebra, n: usize) -> ActionVerdict {
    verdict_from_report(&obstruction_report(g), n)
}

pub fn verdict_from_report(report: &ObstructionReport, n: usize) -> ActionVerdict {
    let Some(bound) = report.min_effective_dim else {
        return ActionVerdict::NoVerdict;
    };
    if n < bound {
        ActionVerdict::Impossible
    } else if n == bound && report.last_term_central && report.center_dim > 1 {
        ActionVerdict::Degenerate
    } else {
        ActionVerdict::NoVerdict
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog, CatalogName};

    fn get(name: CatalogName) -> LieAlgebra {
        catalog(&name).unwrap()
    }

    #[test]
    fn bounds() {
        assert_eq!(
            min_effective_action_dim(&get(CatalogName::Abelian(3))),
            Some(1)
        );
        assert_eq!(
            min_effective_action_dim(&get(CatalogName::Heisenberg(3))),
            Some(2)
        );
        assert_eq!(min_effective_action_dim(&get(CatalogName::St(2))), Some(1));
        assert_eq!(min_effective_action_dim(&get(CatalogName::Sl(2))), None);
    }

    #[test]
    fn heisenberg_has_no_central_obstruction() {
        let r = borderline_analysis(&get(CatalogName::Heisenberg(3))).unwrap();
        assert_eq!(r.last_derived_term.as_ref().unwrap(), &Subspace::axis(3, 2));
        assert_eq!(r.center, Subspace::axis(3, 2));
        assert!(r.last_term_central);
        assert_eq!(r.center_dim, 1);
        assert_eq!(r.verdicts[0].verdict, "no_central_obstruction");
    }

    #[test]
    fn st2_last_term_not_central() {
        let r = borderline_analysis(&get(CatalogName::St(2))).unwrap();
        assert!(!r.last_term_central);
        assert!(r.verdicts.is_empty());
    }

    #[test]
    fn non_solvable_is_an_error() {
        assert!(borderline_analysis(&get(CatalogName::Sl(2))).is_err());
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            n_action_verdict(&get(CatalogName::Heisenberg(3)), 1),
            ActionVerdict::Impossible
        );
        assert_eq!(
            n_action_verdict(&get(CatalogName::N(3)), 2),
            ActionVerdict::Degenerate
        );
        assert_eq!(
            n_action_verdict(&get(CatalogName::Abelian(2)), 2),
            ActionVerdict::NoVerdict
        );
    }
}
