//! Weighted monogamy of `C²` for one focus party against the rest, its
//! concurrence-of-assistance form for pure states, and the qubit-only
//! comparison inequalities.

use super::report::{BoundReport, Relation, Term};
use super::weights::{Simplex, WeightPoint};
use crate::error::{Error, Result};
use crate::measures::{
    concurrence_assistance, concurrence_pure, concurrence_two_qubit, convex_roof_concurrence, is_ppt, ppt_is_decisive,
    OptimizerOptions,
};
use crate::random::derive_seed;
use crate::tensor::{DensityMatrix, Partition, PureState, State};

fn cut_label(cut: &Partition) -> String {
    let j = |v: &[usize]| v.iter().map(|p| p.to_string()).collect::<String>();
    format!("{}|{}", j(cut.side_a()), j(cut.side_b()))
}

/// Concurrence across `cut` of the whole state: closed form for pure input,
/// convex-roof estimate otherwise (exact when the state has rank one).
pub(crate) fn cut_term(state: &State, cut: &Partition, opts: &OptimizerOptions) -> Result<Term> {
    let label = format!("C({})", cut_label(cut));
    match state {
        State::Pure(psi) => Ok(Term::exact(label, concurrence_pure(psi, cut)?)),
        State::Mixed(rho) => Ok(Term::estimated(label, &convex_roof_concurrence(rho, cut, opts)?)),
    }
}

/// `C(ρ_ij)`: Wootters closed form on `2⊗2`, exactly zero for a PPT state
/// on `2⊗3`, convex-roof estimate otherwise.
pub(crate) fn pair_term(state: &State, i: usize, j: usize, opts: &OptimizerOptions) -> Result<Term> {
    let (a, b) = (i.min(j), i.max(j));
    let label = format!("C(ρ_{a}{b})");
    let rho = state.reduced(&[a, b])?;
    if rho.profile().dims() == [2, 2] {
        return Ok(Term::exact(label, concurrence_two_qubit(&rho)?));
    }
    let cut = Partition::new(vec![0], vec![1])?;
    if ppt_is_decisive(rho.profile(), &cut) && is_ppt(&rho, &cut, &opts.tolerances)? {
        return Ok(Term::exact(label, 0.0));
    }
    let est = convex_roof_concurrence(&rho, &cut, opts)?;
    Ok(Term::estimated(label, &est))
}

/// `C_a(ρ_ij)`, a lower-bound estimate unless the pair state is pure.
pub(crate) fn coa_term(state: &State, i: usize, j: usize, opts: &OptimizerOptions) -> Result<Term> {
    let (a, b) = (i.min(j), i.max(j));
    let rho = state.reduced(&[a, b])?;
    let est = concurrence_assistance(&rho, &Partition::new(vec![0], vec![1])?, opts)?;
    Ok(Term::estimated(format!("C_a(ρ_{a}{b})"), &est))
}

/// Terms of `C²(A|B₁…B_{N−1}) ≥ Σ pᵢ X²(ρ_{ABᵢ})`, evaluated once and
/// reported at any number of weight vectors.
#[derive(Debug, Clone)]
pub struct FocusMonogamy {
    inequality: String,
    lhs: Term,
    pairs: Vec<Term>,
    notes: Vec<String>,
}

impl FocusMonogamy {
    /// Pure input uses `C_a` pair terms, mixed input uses `C`.
    pub fn evaluate(state: &State, opts: &OptimizerOptions) -> Result<Self> {
        let n = state.profile().parties();
        if n < 3 {
            return Err(Error::Dimension(format!("monogamy needs at least 3 parties, got {n}")));
        }
        let cut = Partition::versus_rest(vec![0], n)?;
        let lhs = cut_term(state, &cut, opts)?;
        let (inequality, pairs) = match state {
            State::Pure(_) => (
                "C²(A|B…) ≥ Σ pᵢ C_a²(ρ_ABᵢ)",
                (1..n).map(|i| coa_term(state, 0, i, opts)).collect::<Result<Vec<_>>>()?,
            ),
            State::Mixed(_) => (
                "C²(A|B…) ≥ Σ pᵢ C²(ρ_ABᵢ)",
                (1..n).map(|i| pair_term(state, 0, i, opts)).collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(Self { inequality: inequality.into(), lhs, pairs, notes: Vec::new() })
    }

    pub fn pair_terms(&self) -> &[Term] {
        &self.pairs
    }

    pub fn lhs_term(&self) -> &Term {
        &self.lhs
    }

    pub fn report(&self, p: &Simplex, weights: WeightPoint, opts: &OptimizerOptions) -> Result<BoundReport> {
        if p.len() != self.pairs.len() {
            return Err(Error::Validation(format!(
                "{} weights for {} pair terms",
                p.len(),
                self.pairs.len()
            )));
        }
        let rhs = self.pairs.iter().zip(p.weights()).map(|(t, &w)| t.clone().weighted(w)).collect();
        Ok(BoundReport::assemble(
            self.inequality.clone(),
            Relation::AtLeast,
            vec![self.lhs.clone()],
            rhs,
            weights,
            self.notes.clone(),
            &opts.tolerances,
        ))
    }

    pub fn report_interval(&self, x: f64, opts: &OptimizerOptions) -> Result<BoundReport> {
        self.report(&Simplex::interval(x)?, WeightPoint::Interval { x }, opts)
    }
}

fn require_parties(n: usize, want: usize, what: &str) -> Result<()> {
    if n != want {
        return Err(Error::Dimension(format!("{what} needs {want} parties, got {n}")));
    }
    Ok(())
}

/// `C²(|ψ⟩_{A|BC}) ≥ x C_a²(ρ_AB) + (1 − x) C_a²(ρ_AC)` for a pure three-party
/// state. The `C_a` values are lower-bound estimates, so a pass is a
/// necessary condition of the inequality.
pub fn check_theorem1(psi: &PureState, x: f64, opts: &OptimizerOptions) -> Result<BoundReport> {
    require_parties(psi.profile().parties(), 3, "the pure-state C_a bound")?;
    FocusMonogamy::evaluate(&State::Pure(psi.clone()), opts)?.report_interval(x, opts)
}

/// `C²(ρ_{A|B₁B₂}) ≥ x C²(ρ_AB₁) + (1 − x) C²(ρ_AB₂)` for a three-party
/// state. The left side is a convex-roof estimate (exact for rank one); pair
/// terms use the two-qubit closed form on `2⊗2` and estimates otherwise.
pub fn check_theorem2(rho: &DensityMatrix, x: f64, opts: &OptimizerOptions) -> Result<BoundReport> {
    require_parties(rho.profile().parties(), 3, "the mixed-state C bound")?;
    FocusMonogamy::evaluate(&State::Mixed(rho.clone()), opts)?.report_interval(x, opts)
}

/// The `N`-party generalizations: `C_a` terms for pure input, `C` terms for
/// mixed input, with `p` one weight per `Bᵢ`.
pub fn check_corollary(state: &State, p: &Simplex, opts: &OptimizerOptions) -> Result<BoundReport> {
    let n = state.profile().parties();
    if p.len() + 1 != n {
        return Err(Error::Validation(format!("{} weights for {n} parties", p.len())));
    }
    FocusMonogamy::evaluate(state, opts)?.report(p, WeightPoint::Simplex { p: p.clone() }, opts)
}

/// `C²(A|B₁…B_{N−1}) ≥ Σᵢ C²(ρ_ABᵢ)` on qubits.
pub fn check_qubit_ckw(state: &State, opts: &OptimizerOptions) -> Result<BoundReport> {
    let profile = state.profile();
    if !profile.all_qubits() {
        return Err(Error::Dimension(format!("qubit monogamy needs qubits, got {profile}")));
    }
    let n = profile.parties();
    if n < 2 {
        return Err(Error::Dimension("qubit monogamy needs at least 2 parties".into()));
    }
    let lhs = cut_term(state, &Partition::versus_rest(vec![0], n)?, opts)?;
    let rhs = (1..n).map(|i| pair_term(state, 0, i, opts)).collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::assemble(
        "C²(A|B…) ≥ Σ C²(ρ_ABᵢ) (qubits)",
        Relation::AtLeast,
        vec![lhs],
        rhs,
        WeightPoint::None,
        Vec::new(),
        &opts.tolerances,
    ))
}

/// `C²(|ψ⟩_{A|B…}) ≤ Σᵢ C_a²(ρ_ABᵢ)` on pure qubit states. The `C_a` values
/// are lower bounds, so a pass certifies the inequality; a fail is retried
/// twice with four times the restarts on fresh seeds before it is reported.
pub fn check_dual_coa(psi: &PureState, opts: &OptimizerOptions) -> Result<BoundReport> {
    let profile = psi.profile();
    if !profile.all_qubits() {
        return Err(Error::Dimension(format!("dual assistance bound needs qubits, got {profile}")));
    }
    let n = profile.parties();
    if n < 2 {
        return Err(Error::Dimension("dual assistance bound needs at least 2 parties".into()));
    }
    let state = State::Pure(psi.clone());
    let lhs = Term::exact(
        format!("C({})", cut_label(&Partition::versus_rest(vec![0], n)?)),
        concurrence_pure(psi, &Partition::versus_rest(vec![0], n)?)?,
    );
    let mut attempt_opts = opts.clone();
    let mut notes = Vec::new();
    for attempt in 0..3u64 {
        let rhs = (1..n).map(|i| coa_term(&state, 0, i, &attempt_opts)).collect::<Result<Vec<_>>>()?;
        let report = BoundReport::assemble(
            "C²(A|B…) ≤ Σ C_a²(ρ_ABᵢ) (qubits)",
            Relation::AtMost,
            vec![lhs.clone()],
            rhs,
            WeightPoint::None,
            notes.clone(),
            &opts.tolerances,
        );
        if report.satisfied || attempt == 2 {
            return Ok(report);
        }
        let restarts = attempt_opts.restarts_for(2 * 2) * 4;
        notes.push(format!("escalated to {restarts} restarts after a failed pass"));
        attempt_opts = attempt_opts.with_restarts(restarts).with_seed(derive_seed(opts.seed, attempt + 1));
    }
    unreachable!("the final attempt always returns")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;
    use crate::tensor::DimProfile;

    fn product_state(dims: &[usize]) -> PureState {
        let factors: Vec<PureState> = dims
            .iter()
            .map(|&d| PureState::basis(DimProfile::new(vec![d]).unwrap(), &[d - 1]).unwrap())
            .collect();
        states::product(&factors).unwrap()
    }

    #[test]
    fn theorem1_saturates_on_223_state() {
        let opts = OptimizerOptions::new(1);
        let rep = check_theorem1(&states::paper_state_223(), 1.0, &opts).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-12);
        assert!(rep.margin.abs() <= 1e-3, "margin {}", rep.margin);
        assert!(rep.satisfied);
    }

    #[test]
    fn product_states_give_zero_sides() {
        let opts = OptimizerOptions::new(2);
        let prod = product_state(&[2, 3, 2]);
        let rep = check_theorem1(&prod, 0.3, &opts).unwrap();
        assert!(rep.lhs < 1e-24 && rep.rhs < 1e-24);

        let rep = check_theorem2(&prod.density(), 0.3, &opts).unwrap();
        assert!(rep.lhs < 1e-24 && rep.rhs < 1e-24);
        assert!(rep.satisfied);
    }

    #[test]
    fn wrong_party_counts_are_rejected() {
        let opts = OptimizerOptions::new(3);
        let bell = states::bell();
        assert!(matches!(check_theorem1(&bell, 0.5, &opts), Err(Error::Dimension(_))));
        assert!(matches!(check_theorem2(&bell.density(), 0.5, &opts), Err(Error::Dimension(_))));
        let ghz = states::ghz(4, 2).unwrap();
        let bad = Simplex::uniform(2);
        assert!(matches!(check_corollary(&State::Pure(ghz), &bad, &opts), Err(Error::Validation(_))));
        let qutrits = states::antisymmetric_qutrit();
        assert!(matches!(check_qubit_ckw(&State::Pure(qutrits.clone()), &opts), Err(Error::Dimension(_))));
        assert!(matches!(check_dual_coa(&qutrits, &opts), Err(Error::Dimension(_))));
    }

    #[test]
    fn corollary_with_three_parties_is_theorem1() {
        let opts = OptimizerOptions::new(4);
        let psi = states::paper_state_223();
        let a = check_theorem1(&psi, 0.3, &opts).unwrap();
        let b = check_corollary(&State::Pure(psi), &Simplex::interval(0.3).unwrap(), &opts).unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert_eq!(a.rhs, b.rhs);
    }

    #[test]
    fn ghz4_corollary_has_zero_rhs() {
        let opts = OptimizerOptions::new(5);
        let ghz = states::ghz(4, 2).unwrap();
        let rep = check_corollary(&State::Mixed(ghz.density()), &Simplex::uniform(3), &opts).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-9);
        assert!(rep.rhs < 1e-24);
    }

    #[test]
    fn ckw_saturates_on_w_state() {
        let opts = OptimizerOptions::new(6);
        let rep = check_qubit_ckw(&State::Pure(states::w(3).unwrap()), &opts).unwrap();
        assert!((rep.lhs - 8.0 / 9.0).abs() < 1e-12);
        assert!((rep.rhs - 8.0 / 9.0).abs() < 1e-12);
        assert!(rep.margin.abs() < 1e-12);
        assert!(rep.satisfied);

        let rep = check_qubit_ckw(&State::Pure(states::ghz(3, 2).unwrap()), &opts).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-12);
        assert!(rep.rhs < 1e-24);
    }

    #[test]
    fn dual_coa_examples() {
        let opts = OptimizerOptions::new(7);
        let rep = check_dual_coa(&states::ghz(3, 2).unwrap(), &opts).unwrap();
        assert!((rep.lhs - 1.0).abs() < 1e-12);
        assert!((rep.rhs - 2.0).abs() < 1e-3, "rhs {}", rep.rhs);
        assert!(rep.satisfied);

        let rep = check_dual_coa(&states::w(3).unwrap(), &opts).unwrap();
        assert!((rep.lhs - 8.0 / 9.0).abs() < 1e-12);
        assert!(rep.rhs >= 8.0 / 9.0 - 1e-6);

        let prod = product_state(&[2, 2, 2]);
        let rep = check_dual_coa(&prod, &opts).unwrap();
        assert!(rep.lhs < 1e-24 && rep.rhs < 1e-24);
    }
}
