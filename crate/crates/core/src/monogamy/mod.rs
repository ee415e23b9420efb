//! Weighted monogamy inequalities for concurrence and four-partite lower
//! bounds, each evaluated into a [`BoundReport`].

mod checks;
mod four_partite;
mod report;
mod weights;

pub use checks::{
    check_corollary, check_dual_coa, check_qubit_ckw, check_theorem1, check_theorem2, FocusMonogamy,
};
pub use four_partite::{
    best_theorem3_vertex, best_theorem4_vertex, objective_value, optimize_weights, theorem3_rhs,
    theorem4_bound, theorem4_coefficients, theorem4_lower_bound, Objective, PairConcurrences, Theorem4Bound,
    FOUR_PARTITE_DEFAULT_RESTARTS, PAIRS,
};
pub use report::{Accuracy, BoundReport, CheckKind, Provenance, Relation, Term};
pub use weights::{Simplex, Theorem3Weights, Theorem4Weights, WeightPoint};
