use concurrence::measures::{concurrence_two_qubit, OptimizerOptions};
use concurrence::monogamy::{best_theorem4_vertex, theorem4_bound, PairConcurrences, Theorem4Bound, Theorem4Weights};
use concurrence::states::paper_family_2223;
use concurrence::tensor::{partial_trace, State};
use rayon::prelude::*;

use super::Outcome;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub const FAMILIES: &[&str] = &["paper-2223"];

/// One grid point of the family scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub t: f64,
    /// `√` of the four-partite bound at `Theorem4Weights::paper_choice`.
    pub lower_bound: f64,
    /// Two-qubit concurrence of the `(0, 1)` reduction.
    pub exact_pair_concurrence: f64,
    pub optimized_lower_bound: Option<f64>,
}

pub fn scan_point(t: f64, optimize: bool, opts: &OptimizerOptions) -> CliResult<ScanPoint> {
    let rho = paper_family_2223(t)?;
    let exact = concurrence_two_qubit(&partial_trace(&rho, &[0, 1])?)?;
    let state = State::Mixed(rho);
    let lower = theorem4_bound(&state, &Theorem4Weights::paper_choice(), opts)?.concurrence_bound();
    let optimized = if optimize {
        let pairs = PairConcurrences::evaluate(&state, opts)?;
        let (w, _) = best_theorem4_vertex(&pairs);
        Some(Theorem4Bound::from_pairs(&pairs, &w)?.concurrence_bound())
    } else {
        None
    };
    Ok(ScanPoint { t, lower_bound: lower, exact_pair_concurrence: exact, optimized_lower_bound: optimized })
}

pub fn scan(grid: &[f64], optimize: bool, opts: &OptimizerOptions) -> CliResult<Vec<ScanPoint>> {
    if grid.is_empty() {
        return Err(CliError::Usage("scan grid is empty".into()));
    }
    grid.par_iter().map(|&t| scan_point(t, optimize, opts)).collect()
}

pub fn run(cfg: &RunConfig, family: &str, grid: &[f64], optimize: bool) -> CliResult<Outcome> {
    if !FAMILIES.contains(&family) {
        return Err(CliError::Usage(format!("unknown family `{family}`; known: {}", FAMILIES.join(", "))));
    }
    let points = scan(grid, optimize, &cfg.options())?;
    let mut columns = vec!["t", "lower_bound", "exact_pair_concurrence"];
    if optimize {
        columns.push("optimized_lower_bound");
    }
    let mut table = Table::new(&columns);
    for p in points {
        let mut row = vec![p.t.into(), p.lower_bound.into(), p.exact_pair_concurrence.into()];
        if optimize {
            row.push(p.optimized_lower_bound.into());
        }
        table.push(row, Vec::new());
    }
    Ok(Outcome { table, ok: true })
}
