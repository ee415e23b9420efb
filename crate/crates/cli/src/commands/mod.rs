//! One module per subcommand. Each turns a [`RunConfig`] into a [`Outcome`].

pub mod check;
pub mod fuzz;
pub mod measure;
pub mod reproduce;
pub mod scan;

use concurrence::monogamy::{BoundReport, Term};
use serde::Serialize;

use crate::config::{CommandConfig, RunConfig};
use crate::error::CliResult;
use crate::table::{Cell, Table};

/// A finished run: the rows to print and whether every check passed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    pub ok: bool,
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    match &cfg.command {
        CommandConfig::Measure { state, cut, quantities } => measure::run(cfg, state, cut.as_ref(), quantities),
        CommandConfig::Check { .. } => check::run(cfg),
        CommandConfig::Scan { family, grid, optimize } => scan::run(cfg, family, grid, *optimize),
        CommandConfig::Fuzz { .. } => fuzz::run(cfg),
        CommandConfig::Replay { artifact } => fuzz::replay(cfg, artifact),
        CommandConfig::Reproduce => reproduce::run(cfg),
    }
}

/// The serde name of a unit enum value, e.g. `upper-bound`.
pub(crate) fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn term_line(side: &str, t: &Term) -> String {
    let mut line = format!("{side} {:>6} × {}² = {}  [{}", crate::table::sig9(t.weight), t.label, crate::table::sig9(t.value), kebab(&t.accuracy));
    if let Some(r) = t.restarts {
        line.push_str(&format!(", {r} restarts"));
    }
    if t.converged == Some(false) {
        line.push_str(", not converged");
    }
    line.push(']');
    line
}

/// Per-term provenance lines shown under a report row in human output.
pub(crate) fn report_details(r: &BoundReport) -> Vec<String> {
    let p = &r.provenance;
    let mut lines: Vec<String> = p.lhs_terms.iter().map(|t| term_line("lhs", t)).collect();
    lines.extend(p.rhs_terms.iter().filter(|t| t.weight != 0.0).map(|t| term_line("rhs", t)));
    lines.extend(p.notes.iter().map(|n| format!("note: {n}")));
    lines
}

pub(crate) const REPORT_COLUMNS: [&str; 10] = [
    "inequality",
    "weights",
    "lhs",
    "rhs",
    "margin",
    "tolerance",
    "satisfied",
    "check",
    "lhs_accuracy",
    "rhs_accuracy",
];

pub(crate) fn report_row(r: &BoundReport) -> Vec<Cell> {
    vec![
        r.inequality.clone().into(),
        r.weights.to_string().into(),
        r.lhs.into(),
        r.rhs.into(),
        r.margin.into(),
        r.tolerance.into(),
        r.satisfied.into(),
        kebab(&r.provenance.check).into(),
        kebab(&r.provenance.lhs_accuracy).into(),
        kebab(&r.provenance.rhs_accuracy).into(),
    ]
}
