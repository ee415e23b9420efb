use concurrence::measures::OptimizerOptions;
use concurrence::monogamy::{
    best_theorem4_vertex, check_dual_coa, check_qubit_ckw, optimize_weights, theorem3_rhs, theorem4_bound,
    theorem4_lower_bound, BoundReport, FocusMonogamy, Objective, PairConcurrences, Simplex, Theorem3Weights,
    Theorem4Bound, Theorem4Weights,
};
use concurrence::states::StateSpec;
use concurrence::tensor::State;

use super::{kebab, report_details, report_row, Outcome, REPORT_COLUMNS};
use crate::config::{CommandConfig, Inequality, RunConfig, WeightChoice};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};

const DEFAULT_X: [f64; 3] = [0.0, 0.5, 1.0];

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let CommandConfig::Check { inequality, state, x, p, weights, bound_only } = &cfg.command else {
        unreachable!("dispatched on the check command");
    };
    let opts = cfg.options();
    let built = state.build()?;
    let n = built.profile().parties();
    let profile = built.profile().to_string();
    let usage = |msg: String| CliError::Usage(msg);

    let weights_allowed = match inequality {
        Inequality::Theorem1 | Inequality::Theorem2 => matches!(weights, WeightChoice::Uniform | WeightChoice::Optimize),
        Inequality::Theorem3 => matches!(weights, WeightChoice::Uniform | WeightChoice::Optimize),
        Inequality::Theorem4 => true,
        _ => *weights == WeightChoice::Uniform,
    };
    if !weights_allowed {
        return Err(usage(format!("--{} does not apply to {}", weight_flag(*weights), kebab(inequality))));
    }
    if !x.is_empty() && !matches!(inequality, Inequality::Theorem1 | Inequality::Theorem2) {
        return Err(usage(format!("--x does not apply to {}", kebab(inequality))));
    }
    if p.is_some() && *inequality != Inequality::Corollary {
        return Err(usage(format!("--p does not apply to {}", kebab(inequality))));
    }
    if *bound_only && *inequality != Inequality::Theorem4 {
        return Err(usage("--bound-only applies to theorem4 only".into()));
    }

    let reports: Vec<BoundReport> = match inequality {
        Inequality::Theorem1 | Inequality::Theorem2 => {
            if n != 3 {
                return Err(usage(format!("{} needs a 3-party state, got {n} parties", kebab(inequality))));
            }
            let input = match (inequality, built) {
                (Inequality::Theorem1, s @ State::Pure(_)) => s,
                (Inequality::Theorem1, State::Mixed(_)) => {
                    return Err(usage("theorem1 needs a pure state; use theorem2 for mixed input".into()))
                }
                (_, s) => State::Mixed(s.density()),
            };
            let focus = FocusMonogamy::evaluate(&input, &opts)?;
            let xs = interval_weights(&focus, x, *weights);
            xs.iter().map(|&x| focus.report_interval(x, &opts)).collect::<Result<_, _>>()?
        }
        Inequality::Corollary => {
            if n < 3 {
                return Err(usage(format!("corollary needs at least 3 parties, got {n}")));
            }
            let p = match p {
                Some(p) => Simplex::new(p.clone())?,
                None => Simplex::uniform(n - 1),
            };
            if p.len() + 1 != n {
                return Err(usage(format!("--p has {} weights; {n} parties need {}", p.len(), n - 1)));
            }
            vec![concurrence::monogamy::check_corollary(&built, &p, &opts)?]
        }
        Inequality::Ckw => {
            if !built.profile().all_qubits() {
                return Err(usage(format!("ckw needs qubits, got {}", built.profile())));
            }
            vec![check_qubit_ckw(&built, &opts)?]
        }
        Inequality::DualCoa => match &built {
            State::Pure(psi) if built.profile().all_qubits() => vec![check_dual_coa(psi, &opts)?],
            _ => return Err(usage("dual-coa needs a pure qubit state".into())),
        },
        Inequality::Theorem3 => {
            require_four(n, inequality)?;
            match weights {
                WeightChoice::Optimize => vec![optimize_weights(Objective::Theorem3, &built, &opts)?.1],
                _ => vec![theorem3_rhs(&built, &Theorem3Weights::uniform(), &opts)?],
            }
        }
        Inequality::Theorem4 => {
            require_four(n, inequality)?;
            if *bound_only {
                return bound_only_outcome(state, &built, *weights, &opts);
            }
            match weights {
                WeightChoice::Optimize => vec![optimize_weights(Objective::Theorem4, &built, &opts)?.1],
                WeightChoice::Paper => vec![theorem4_lower_bound(&built, &Theorem4Weights::paper_choice(), &opts)?],
                WeightChoice::Uniform => vec![theorem4_lower_bound(&built, &Theorem4Weights::uniform(), &opts)?],
            }
        }
    };

    let mut table = Table::new(&REPORT_COLUMNS);
    for r in &reports {
        table.push(report_row(r), report_details(r));
    }
    table.footer.push(format!("state {} on {profile}", state.name));
    let ok = reports.iter().all(|r| r.satisfied);
    Ok(Outcome { table, ok })
}

fn weight_flag(w: WeightChoice) -> &'static str {
    match w {
        WeightChoice::Uniform => "uniform",
        WeightChoice::Optimize => "optimize",
        WeightChoice::Paper => "paper-weights",
    }
}

fn require_four(n: usize, inequality: &Inequality) -> CliResult<()> {
    if n != 4 {
        return Err(CliError::Usage(format!("{} needs a 4-party state, got {n} parties", kebab(inequality))));
    }
    Ok(())
}

/// The explicit `--x` list, the best vertex with `--optimize`, or the default
/// grid. The rhs is linear in `x`, so the larger pair term picks the vertex.
fn interval_weights(focus: &FocusMonogamy, x: &[f64], weights: WeightChoice) -> Vec<f64> {
    if weights == WeightChoice::Optimize {
        let sq: Vec<f64> = focus.pair_terms().iter().map(|t| t.value * t.value).collect();
        return vec![if sq[0] >= sq[1] { 1.0 } else { 0.0 }];
    }
    if x.is_empty() {
        DEFAULT_X.to_vec()
    } else {
        x.to_vec()
    }
}

/// The four-partite bound without its left side: only the pair terms are
/// evaluated, which skips the expensive four-partite convex roof.
fn bound_only_outcome(spec: &StateSpec, state: &State, weights: WeightChoice, opts: &OptimizerOptions) -> CliResult<Outcome> {
    let (w, bound): (Theorem4Weights, Theorem4Bound) = match weights {
        WeightChoice::Optimize => {
            let pairs = PairConcurrences::evaluate(state, opts)?;
            let (w, _) = best_theorem4_vertex(&pairs);
            let bound = Theorem4Bound::from_pairs(&pairs, &w)?;
            (w, bound)
        }
        WeightChoice::Paper => {
            let w = Theorem4Weights::paper_choice();
            let b = theorem4_bound(state, &w, opts)?;
            (w, b)
        }
        WeightChoice::Uniform => {
            let w = Theorem4Weights::uniform();
            let b = theorem4_bound(state, &w, opts)?;
            (w, b)
        }
    };
    let mut table = Table::new(&["inequality", "weights", "bound", "concurrence_bound", "derivation", "rhs_accuracy"]);
    let details = bound
        .terms
        .iter()
        .filter(|t| t.weight != 0.0)
        .map(|t| format!("rhs {} × {}² = {}  [{}]", crate::table::sig9(t.weight), t.label, crate::table::sig9(t.value), kebab(&t.accuracy)))
        .collect();
    table.push(
        vec![
            Cell::from("C²(ρ) ≥ ¼ Σ L_ij C²(ρ_ij)"),
            concurrence::monogamy::WeightPoint::Theorem4(w).to_string().into(),
            bound.aggregated.into(),
            bound.concurrence_bound().into(),
            bound.derivation.into(),
            kebab(&bound.accuracy).into(),
        ],
        details,
    );
    table.footer.push(format!("state {} on {}", spec.name, state.profile()));
    Ok(Outcome { table, ok: true })
}
