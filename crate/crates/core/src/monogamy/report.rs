//! Inequality reports with explicit error-direction bookkeeping.
//!
//! Both sides of every inequality are sums `Σ wᵢ Cᵢ²` with `wᵢ ≥ 0`. Each
//! `Cᵢ` is either a closed form or a one-sided optimizer estimate, and the
//! report states what a pass or a fail actually establishes.

use serde::{Deserialize, Serialize};

use super::weights::WeightPoint;
use crate::measures::{Direction, RoofEstimate};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Accuracy {
    Exact,
    /// At least the true value.
    UpperBound,
    /// At most the true value.
    LowerBound,
    Unknown,
}

impl Accuracy {
    /// Accuracy of a nonnegative combination of two quantities.
    pub fn combine(self, other: Accuracy) -> Accuracy {
        use Accuracy::*;
        match (self, other) {
            (Exact, x) | (x, Exact) => x,
            (UpperBound, UpperBound) => UpperBound,
            (LowerBound, LowerBound) => LowerBound,
            _ => Unknown,
        }
    }

    pub fn of_estimate(est: &RoofEstimate) -> Accuracy {
        if est.is_exact() {
            return Accuracy::Exact;
        }
        match est.direction {
            Direction::UpperBoundOfMin => Accuracy::UpperBound,
            Direction::LowerBoundOfMax => Accuracy::LowerBound,
        }
    }

    fn at_least_true(self) -> bool {
        matches!(self, Accuracy::Exact | Accuracy::UpperBound)
    }

    fn at_most_true(self) -> bool {
        matches!(self, Accuracy::Exact | Accuracy::LowerBound)
    }
}

/// What a numerical pass establishes about the true inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Every term is a closed form.
    Exact,
    /// A pass certifies the true inequality.
    Sufficient,
    /// The true inequality implies a pass; a fail refutes it.
    Necessary,
    /// Estimates err in directions that certify nothing.
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs ≥ rhs`.
    AtLeast,
    /// `lhs ≤ rhs`.
    AtMost,
}

/// One `w·C²` summand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    /// The concurrence-type quantity, not squared.
    pub value: f64,
    pub weight: f64,
    pub accuracy: Accuracy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
}

impl Term {
    pub fn exact(label: impl Into<String>, value: f64) -> Self {
        Self { label: label.into(), value, weight: 1.0, accuracy: Accuracy::Exact, restarts: None, converged: None }
    }

    pub fn estimated(label: impl Into<String>, est: &RoofEstimate) -> Self {
        let accuracy = Accuracy::of_estimate(est);
        let (restarts, converged) = if est.is_exact() {
            (None, None)
        } else {
            (Some(est.restarts_used), Some(est.converged))
        };
        Self { label: label.into(), value: est.value, weight: 1.0, accuracy, restarts, converged }
    }

    pub fn weighted(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn contribution(&self) -> f64 {
        if self.weight == 0.0 {
            0.0
        } else {
            self.weight * self.value * self.value
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub lhs_terms: Vec<Term>,
    pub rhs_terms: Vec<Term>,
    pub lhs_accuracy: Accuracy,
    pub rhs_accuracy: Accuracy,
    pub check: CheckKind,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inequality: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// Slack in the direction of the inequality: `lhs − rhs` for `≥`,
    /// `rhs − lhs` for `≤`. Positive means satisfied with room to spare.
    pub margin: f64,
    pub tolerance: f64,
    pub satisfied: bool,
    pub weights: WeightPoint,
    pub provenance: Provenance,
}

fn side_accuracy(terms: &[Term]) -> Accuracy {
    terms
        .iter()
        .filter(|t| t.weight != 0.0)
        .fold(Accuracy::Exact, |acc, t| acc.combine(t.accuracy))
}

impl BoundReport {
    pub(crate) fn assemble(
        inequality: impl Into<String>,
        relation: Relation,
        lhs_terms: Vec<Term>,
        rhs_terms: Vec<Term>,
        weights: WeightPoint,
        notes: Vec<String>,
        tol: &Tolerances,
    ) -> Self {
        let lhs: f64 = lhs_terms.iter().map(Term::contribution).sum();
        let rhs: f64 = rhs_terms.iter().map(Term::contribution).sum();
        let lhs_accuracy = side_accuracy(&lhs_terms);
        let rhs_accuracy = side_accuracy(&rhs_terms);

        // Orient as big ≥ small.
        let (big, small) = match relation {
            Relation::AtLeast => (lhs_accuracy, rhs_accuracy),
            Relation::AtMost => (rhs_accuracy, lhs_accuracy),
        };
        let check = if big == Accuracy::Exact && small == Accuracy::Exact {
            CheckKind::Exact
        } else if big.at_most_true() && small.at_least_true() {
            CheckKind::Sufficient
        } else if big.at_least_true() && small.at_most_true() {
            CheckKind::Necessary
        } else {
            CheckKind::Heuristic
        };
        let tolerance = if check == CheckKind::Exact { tol.exact_inequality } else { tol.estimated_inequality };
        let margin = match relation {
            Relation::AtLeast => lhs - rhs,
            Relation::AtMost => rhs - lhs,
        };
        Self {
            inequality: inequality.into(),
            relation,
            lhs,
            rhs,
            margin,
            tolerance,
            satisfied: margin >= -tolerance,
            weights,
            provenance: Provenance { lhs_terms, rhs_terms, lhs_accuracy, rhs_accuracy, check, notes },
        }
    }
}
