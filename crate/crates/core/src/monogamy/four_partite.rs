//! Four-partite bounds built from the six pairwise concurrences.
//!
//! Parties are `0..4`. The 2|2 cuts are `01|23`, `02|13`, `03|12` with
//! party 0 on side A, and the four pairs a 2|2 cut separates are listed as
//! `A₁B₁, A₁B₂, A₂B₁, A₂B₂`.

use super::checks::{cut_term, pair_term};
use super::report::{Accuracy, BoundReport, Relation, Term};
use super::weights::{Simplex, Theorem3Weights, Theorem4Weights, WeightPoint};
use crate::error::{Error, Result};
use crate::measures::{concurrence_4partite_pure, convex_roof_four_partite, OptimizerOptions};
use crate::tensor::{Partition, State};

/// The six pairs in the order used by [`PairConcurrences`].
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

const SPLITS: [([usize; 2], [usize; 2]); 3] = [([0, 1], [2, 3]), ([0, 2], [1, 3]), ([0, 3], [1, 2])];

/// Largest disagreement tolerated between the two forms of the bound.
const AGGREGATION_TOL: f64 = 1e-9;

fn pair_index(i: usize, j: usize) -> usize {
    let key = (i.min(j), i.max(j));
    PAIRS.iter().position(|&p| p == key).expect("distinct parties below 4")
}

/// Pairs `(t, s)`, `s ≠ t` increasing, indexed like `p[t]`.
fn focus_pairs(t: usize) -> [usize; 3] {
    let mut out = [0; 3];
    for (k, s) in (0..4).filter(|&s| s != t).enumerate() {
        out[k] = pair_index(t, s);
    }
    out
}

/// Pairs separated by the `c`-th 2|2 cut, indexed like `x[c]`.
fn split_pairs(c: usize) -> [usize; 4] {
    let ([a1, a2], [b1, b2]) = SPLITS[c];
    [pair_index(a1, b1), pair_index(a1, b2), pair_index(a2, b1), pair_index(a2, b2)]
}

fn require_four(state: &State) -> Result<()> {
    let n = state.profile().parties();
    if n != 4 {
        return Err(Error::Dimension(format!("four-partite bounds need 4 parties, got {n}")));
    }
    Ok(())
}

/// `C(ρ_ij)` for the six pairs. Pairs that were not requested hold a
/// zero-weight placeholder and must not be used with a nonzero weight.
#[derive(Debug, Clone)]
pub struct PairConcurrences {
    terms: Vec<Term>,
    evaluated: [bool; 6],
}

impl PairConcurrences {
    pub fn evaluate(state: &State, opts: &OptimizerOptions) -> Result<Self> {
        Self::evaluate_needed(state, [true; 6], opts)
    }

    pub fn evaluate_needed(state: &State, needed: [bool; 6], opts: &OptimizerOptions) -> Result<Self> {
        require_four(state)?;
        let terms = PAIRS
            .iter()
            .zip(needed)
            .map(|(&(i, j), want)| {
                if want {
                    pair_term(state, i, j, opts)
                } else {
                    Ok(Term {
                        accuracy: Accuracy::Unknown,
                        ..Term::exact(format!("C(ρ_{i}{j}) (not evaluated)"), 0.0).weighted(0.0)
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms, evaluated: needed })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.terms[pair_index(i, j)].value
    }

    fn squares(&self) -> [f64; 6] {
        std::array::from_fn(|k| self.terms[k].value * self.terms[k].value)
    }

    fn weighted(&self, coefficients: &[f64; 6]) -> Result<Vec<Term>> {
        self.terms
            .iter()
            .zip(coefficients)
            .zip(self.evaluated)
            .map(|((t, &w), done)| {
                if w != 0.0 && !done {
                    return Err(Error::Validation(format!("{} carries weight {w}", t.label)));
                }
                Ok(t.clone().weighted(w))
            })
            .collect()
    }
}

/// `L_ij` per pair: `p_ij + p_ji` plus the `x` components of the two 2|2
/// cuts that separate `i` and `j`.
pub fn theorem4_coefficients(w: &Theorem4Weights) -> [f64; 6] {
    let mut l = [0.0; 6];
    for t in 0..4 {
        for (k, pair) in focus_pairs(t).into_iter().enumerate() {
            l[pair] += w.p[t][k];
        }
    }
    for c in 0..3 {
        for (m, pair) in split_pairs(c).into_iter().enumerate() {
            l[pair] += w.x[c][m];
        }
    }
    l
}

/// `¼[Σ_t Σ_s p_ts C²(ρ_ts) + Σ_c Σ_m x_cm C²(ρ_pair(c,m))]`, summed cut by
/// cut.
fn derivation_rhs(squares: &[f64; 6], w: &Theorem4Weights) -> f64 {
    let focus: f64 = (0..4)
        .map(|t| focus_pairs(t).iter().zip(w.p[t].weights()).map(|(&k, p)| p * squares[k]).sum::<f64>())
        .sum();
    let split: f64 = (0..3)
        .map(|c| split_pairs(c).iter().zip(w.x[c].weights()).map(|(&k, x)| x * squares[k]).sum::<f64>())
        .sum();
    0.25 * (focus + split)
}

fn aggregated_rhs(squares: &[f64; 6], l: &[f64; 6]) -> f64 {
    0.25 * l.iter().zip(squares).map(|(l, c2)| l * c2).sum::<f64>()
}

/// The four-partite lower bound on `C²(ρ)` in both of its forms.
#[derive(Debug, Clone)]
pub struct Theorem4Bound {
    /// `¼ Σ_{i<j} L_ij C²(ρ_ij)`.
    pub aggregated: f64,
    /// The same bound summed cut by cut.
    pub derivation: f64,
    pub coefficients: [f64; 6],
    /// Pair terms weighted by `L_ij / 4`.
    pub terms: Vec<Term>,
    pub accuracy: Accuracy,
}

impl Theorem4Bound {
    pub fn from_pairs(pairs: &PairConcurrences, w: &Theorem4Weights) -> Result<Self> {
        let l = theorem4_coefficients(w);
        let quarter = l.map(|v| 0.25 * v);
        let terms = pairs.weighted(&quarter)?;
        let squares = pairs.squares();
        let aggregated = aggregated_rhs(&squares, &l);
        let derivation = derivation_rhs(&squares, w);
        if (aggregated - derivation).abs() > AGGREGATION_TOL {
            return Err(Error::Validation(format!(
                "aggregated bound {aggregated} disagrees with the cut-by-cut sum {derivation}"
            )));
        }
        let accuracy = terms
            .iter()
            .filter(|t| t.weight != 0.0)
            .fold(Accuracy::Exact, |acc, t| acc.combine(t.accuracy));
        Ok(Self { aggregated, derivation, coefficients: l, terms, accuracy })
    }

    /// The implied lower bound on `C(ρ)`.
    pub fn concurrence_bound(&self) -> f64 {
        self.aggregated.max(0.0).sqrt()
    }
}

/// Evaluates only the pairs with a nonzero `L_ij`.
pub fn theorem4_bound(state: &State, w: &Theorem4Weights, opts: &OptimizerOptions) -> Result<Theorem4Bound> {
    let l = theorem4_coefficients(w);
    let pairs = PairConcurrences::evaluate_needed(state, l.map(|v| v != 0.0), opts)?;
    Theorem4Bound::from_pairs(&pairs, w)
}

/// Restarts of the four-partite convex roof when the caller sets none. A
/// restart on a full-rank 24-dimensional state takes seconds.
pub const FOUR_PARTITE_DEFAULT_RESTARTS: usize = 4;

fn four_partite_lhs(state: &State, opts: &OptimizerOptions) -> Result<Term> {
    match state {
        State::Pure(psi) => Ok(Term::exact("C(ρ)", concurrence_4partite_pure(psi)?)),
        State::Mixed(rho) => {
            let opts = opts.clone().with_restarts(opts.restarts.unwrap_or(FOUR_PARTITE_DEFAULT_RESTARTS));
            Ok(Term::estimated("C(ρ)", &convex_roof_four_partite(rho, &opts)?))
        }
    }
}

fn theorem4_notes(state: &State) -> Vec<String> {
    let mut notes = vec!["aggregated and cut-by-cut forms agree".to_string()];
    if matches!(state, State::Mixed(_)) {
        notes.push("2|2 cut terms use the convex-roof extension of the pure-state A₁A₂|B₁B₂ bound".into());
    }
    notes
}

fn theorem4_report(state: &State, bound: Theorem4Bound, w: &Theorem4Weights, lhs: Term, opts: &OptimizerOptions) -> BoundReport {
    BoundReport::assemble(
        "C²(ρ) ≥ ¼ Σ L_ij C²(ρ_ij)",
        Relation::AtLeast,
        vec![lhs],
        bound.terms,
        WeightPoint::Theorem4(w.clone()),
        theorem4_notes(state),
        &opts.tolerances,
    )
}

/// `C²(ρ) ≥ ¼ Σ_{i<j} L_ij C²(ρ_ij)`. The left side is the seven-cut pure
/// formula for pure input and a convex-roof estimate otherwise.
pub fn theorem4_lower_bound(state: &State, w: &Theorem4Weights, opts: &OptimizerOptions) -> Result<BoundReport> {
    let bound = theorem4_bound(state, w, opts)?;
    let lhs = four_partite_lhs(state, opts)?;
    Ok(theorem4_report(state, bound, w, lhs, opts))
}

fn theorem3_rhs_terms(pairs: &PairConcurrences, w: &Theorem3Weights, qubits: bool) -> Result<Vec<Term>> {
    let t = w.t_matrix(qubits);
    let mut coefficients = [0.0; 6];
    for (i, a) in [0, 1].into_iter().enumerate() {
        for (j, b) in [2, 3].into_iter().enumerate() {
            coefficients[pair_index(a, b)] = t[i][j];
        }
    }
    let terms = pairs.weighted(&coefficients)?;
    Ok(PAIRS
        .iter()
        .zip(terms)
        .filter(|(&(a, b), _)| a < 2 && b >= 2)
        .map(|(_, t)| t)
        .collect())
}

fn theorem3_value(squares: &[f64; 6], t: &[[f64; 2]; 2]) -> f64 {
    t[0][0] * squares[pair_index(0, 2)]
        + t[0][1] * squares[pair_index(0, 3)]
        + t[1][0] * squares[pair_index(1, 2)]
        + t[1][1] * squares[pair_index(1, 3)]
}

fn theorem3_report(state: &State, pairs: &PairConcurrences, w: &Theorem3Weights, lhs: Term, opts: &OptimizerOptions) -> Result<BoundReport> {
    let qubits = state.profile().all_qubits();
    let rhs = theorem3_rhs_terms(pairs, w, qubits)?;
    let mut notes = Vec::new();
    if qubits {
        notes.push("qubit coefficients T₁₁ = x₁+x₃, T₁₂ = x₂+x₃, T₂₁ = x₁+x₄, T₂₂ = x₂+x₄".to_string());
    }
    if matches!(state, State::Mixed(_)) {
        notes.push("mixed input uses the convex-roof extension of the pure-state bound".into());
    }
    Ok(BoundReport::assemble(
        "C²(A₁A₂|B₁B₂) ≥ Σ T_ij C²(ρ_AᵢBⱼ)",
        Relation::AtLeast,
        vec![lhs],
        rhs,
        WeightPoint::Theorem3(w.clone()),
        notes,
        &opts.tolerances,
    ))
}

fn split_cut() -> Partition {
    Partition::new(vec![0, 1], vec![2, 3]).expect("static cut")
}

/// `C²(A₁A₂|B₁B₂) ≥ Σ T_ij C²(ρ_AᵢBⱼ)` at the cut `01|23`, with
/// `T₁₁ = x₁y₁₁ + x₃y₃₁`, `T₁₂ = x₂y₂₁ + x₃y₃₂`, `T₂₁ = x₁y₁₂ + x₄y₄₁`,
/// `T₂₂ = x₂y₂₂ + x₄y₄₂`. On four qubits the `y` split is replaced by full
/// weight on both pairs.
pub fn theorem3_rhs(state: &State, w: &Theorem3Weights, opts: &OptimizerOptions) -> Result<BoundReport> {
    require_four(state)?;
    let t = w.t_matrix(state.profile().all_qubits());
    let mut needed = [false; 6];
    for (i, a) in [0, 1].into_iter().enumerate() {
        for (j, b) in [2, 3].into_iter().enumerate() {
            needed[pair_index(a, b)] = t[i][j] != 0.0;
        }
    }
    let pairs = PairConcurrences::evaluate_needed(state, needed, opts)?;
    let lhs = cut_term(state, &split_cut(), opts)?;
    theorem3_report(state, &pairs, w, lhs, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    Theorem3,
    Theorem4,
}

/// Odometer over `radices`, first digit most significant.
fn vertices(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let count: usize = radices.iter().product();
    (0..count).map(move |mut n| {
        let mut digits = vec![0; radices.len()];
        for (d, &r) in digits.iter_mut().zip(radices).rev() {
            *d = n % r;
            n /= r;
        }
        digits
    })
}

/// Keeps the first vertex in lexicographic order among those attaining the
/// maximum.
fn best_vertex<W>(candidates: impl Iterator<Item = (W, f64)>) -> (W, f64) {
    let mut best: Option<(W, f64)> = None;
    for (w, v) in candidates {
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((w, v));
        }
    }
    best.expect("at least one vertex")
}

/// Best Theorem-3 weights among the 64 vertices.
pub fn best_theorem3_vertex(pairs: &PairConcurrences, qubits: bool) -> (Theorem3Weights, f64) {
    let squares = pairs.squares();
    best_vertex(vertices(&[4, 2, 2, 2, 2]).map(|d| {
        let w = Theorem3Weights {
            x: Simplex::vertex(4, d[0]),
            y: std::array::from_fn(|t| Simplex::vertex(2, d[t + 1])),
        };
        let v = theorem3_value(&squares, &w.t_matrix(qubits));
        (w, v)
    }))
}

/// Best Theorem-4 weights among the 5184 vertices.
pub fn best_theorem4_vertex(pairs: &PairConcurrences) -> (Theorem4Weights, f64) {
    let squares = pairs.squares();
    best_vertex(vertices(&[3, 3, 3, 3, 4, 4, 4]).map(|d| {
        let w = Theorem4Weights {
            p: std::array::from_fn(|t| Simplex::vertex(3, d[t])),
            x: std::array::from_fn(|c| Simplex::vertex(4, d[c + 4])),
        };
        let v = aggregated_rhs(&squares, &theorem4_coefficients(&w));
        (w, v)
    }))
}

/// Rhs value of either objective at interior weights, for comparison with
/// the vertex optimum.
pub fn objective_value(objective: Objective, pairs: &PairConcurrences, weights: &WeightPoint, qubits: bool) -> Result<f64> {
    let squares = pairs.squares();
    match (objective, weights) {
        (Objective::Theorem3, WeightPoint::Theorem3(w)) => Ok(theorem3_value(&squares, &w.t_matrix(qubits))),
        (Objective::Theorem4, WeightPoint::Theorem4(w)) => Ok(aggregated_rhs(&squares, &theorem4_coefficients(w))),
        _ => Err(Error::Validation(format!("weights {weights} do not fit {objective:?}"))),
    }
}

/// The rhs is linear in each simplex block separately, so its maximum over
/// the weight polytope is attained at a vertex; all vertices are enumerated.
pub fn optimize_weights(objective: Objective, state: &State, opts: &OptimizerOptions) -> Result<(WeightPoint, BoundReport)> {
    require_four(state)?;
    let pairs = PairConcurrences::evaluate(state, opts)?;
    match objective {
        Objective::Theorem3 => {
            let (w, _) = best_theorem3_vertex(&pairs, state.profile().all_qubits());
            let lhs = cut_term(state, &split_cut(), opts)?;
            let report = theorem3_report(state, &pairs, &w, lhs, opts)?;
            Ok((WeightPoint::Theorem3(w), report))
        }
        Objective::Theorem4 => {
            let (w, _) = best_theorem4_vertex(&pairs);
            let bound = Theorem4Bound::from_pairs(&pairs, &w)?;
            let lhs = four_partite_lhs(state, opts)?;
            let report = theorem4_report(state, bound, &w, lhs, opts);
            Ok((WeightPoint::Theorem4(w), report))
        }
    }
}
