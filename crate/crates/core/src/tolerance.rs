//! Every numerical threshold used to accept or reject a state, a decomposition,
//! or an inequality lives in [`Tolerances`]. Validation reports echo the
//! threshold they were judged against.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Max elementwise deviation `|ρ_ij − conj(ρ_ji)|`.
    pub hermiticity: f64,
    /// `|Tr ρ − 1|`.
    pub trace: f64,
    /// Smallest eigenvalue allowed is `−psd`.
    pub psd: f64,
    /// `|‖ψ‖ − 1|` for pure states.
    pub norm: f64,
    /// Eigenvalues at or below this are outside the numerical support.
    pub rank_cutoff: f64,
    /// Max elementwise deviation of `M†M` from the identity.
    pub isometry: f64,
    /// Max elementwise deviation of `Σ p|ψ⟩⟨ψ|` from the realized matrix.
    pub ensemble: f64,
    /// Weight vectors must sum to one within this.
    pub simplex: f64,
    /// Inequality slack allowed when any term is an optimizer estimate.
    pub estimated_inequality: f64,
    /// Inequality slack allowed when every term is a closed form.
    pub exact_inequality: f64,
    /// Clamping a concurrence by more than this is logged.
    pub clamp_report: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            trace: 1e-10,
            psd: 1e-10,
            norm: 1e-10,
            rank_cutoff: 1e-10,
            isometry: 1e-10,
            ensemble: 1e-8,
            simplex: 1e-12,
            estimated_inequality: 5e-3,
            exact_inequality: 1e-9,
            clamp_report: 1e-9,
        }
    }
}

impl Tolerances {
    /// Replace both inequality slacks with a single value.
    pub fn with_inequality(mut self, slack: f64) -> Self {
        self.estimated_inequality = slack;
        self.exact_inequality = slack;
        self
    }
}
