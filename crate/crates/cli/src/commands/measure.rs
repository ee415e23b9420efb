use concurrence::measures::{
    coa_upper_bound, concurrence_4partite_pure, concurrence_assistance, concurrence_pure, concurrence_two_qubit,
    convex_roof_concurrence, convex_roof_four_partite, Direction, OptimizerOptions, RoofEstimate,
};
use concurrence::monogamy::FOUR_PARTITE_DEFAULT_RESTARTS;
use concurrence::states::StateSpec;
use concurrence::tensor::{partial_trace, State};
use concurrence::Partition;

use super::{kebab, Outcome};
use crate::config::{Quantity, RunConfig};
use crate::error::CliResult;
use crate::table::{Cell, Table};

struct Measured {
    value: f64,
    direction: &'static str,
    restarts: Option<usize>,
    converged: Option<bool>,
}

impl Measured {
    fn exact(value: f64) -> Self {
        Self { value, direction: "exact", restarts: None, converged: None }
    }

    fn estimate(est: RoofEstimate) -> Self {
        if est.is_exact() {
            return Self::exact(est.value);
        }
        let direction = match est.direction {
            Direction::UpperBoundOfMin => "upper-bound",
            Direction::LowerBoundOfMax => "lower-bound",
        };
        Self { value: est.value, direction, restarts: Some(est.restarts_used), converged: Some(est.converged) }
    }
}

pub fn run(cfg: &RunConfig, spec: &StateSpec, cut: Option<&Partition>, quantities: &[Quantity]) -> CliResult<Outcome> {
    let state = spec.build()?;
    let n = state.profile().parties();
    let cut = match cut {
        Some(c) => c.clone(),
        None => Partition::versus_rest(vec![0], n)?,
    };
    cut.check_for(n)?;
    let opts = cfg.options();
    let mut table = Table::new(&["quantity", "cut", "value", "direction", "restarts", "converged"]);
    for &q in quantities {
        let m = measure(&state, &cut, q, &opts)?;
        let cut_cell: Cell = match q {
            Quantity::FourPartite => "all".into(),
            _ => cut.to_string().into(),
        };
        table.push(
            vec![kebab(&q).into(), cut_cell, m.value.into(), m.direction.into(), m.restarts.into(), m.converged.into()],
            Vec::new(),
        );
    }
    table.footer.push(format!("state {} on {}", spec.name, state.profile()));
    Ok(Outcome { table, ok: true })
}

fn measure(
    state: &State,
    cut: &Partition,
    q: Quantity,
    opts: &OptimizerOptions,
) -> CliResult<Measured> {
    let n = state.profile().parties();
    let rho = || state.density();
    let m = match q {
        Quantity::Concurrence => match state {
            State::Pure(psi) if cut.covers(n) => Measured::exact(concurrence_pure(psi, cut)?),
            _ => Measured::estimate(convex_roof_concurrence(&rho(), cut, opts)?),
        },
        Quantity::Roof => Measured::estimate(convex_roof_concurrence(&rho(), cut, opts)?),
        Quantity::Assistance => Measured::estimate(concurrence_assistance(&rho(), cut, opts)?),
        Quantity::CoaUpper => Measured { direction: "upper-bound", ..Measured::exact(coa_upper_bound(&rho(), cut)?) },
        Quantity::TwoQubit => {
            let reduced = partial_trace(&rho(), &cut.support())?;
            Measured::exact(concurrence_two_qubit(&reduced)?)
        }
        Quantity::FourPartite => match state {
            State::Pure(psi) => Measured::exact(concurrence_4partite_pure(psi)?),
            State::Mixed(r) => {
                let opts = opts.clone().with_restarts(opts.restarts.unwrap_or(FOUR_PARTITE_DEFAULT_RESTARTS));
                Measured::estimate(convex_roof_four_partite(r, &opts)?)
            }
        },
    };
    Ok(m)
}
