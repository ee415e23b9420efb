//! Every closed-form or quoted value of the reference examples, recomputed.

use concurrence::measures::{concurrence_assistance, concurrence_pure, concurrence_two_qubit, convex_roof_concurrence};
use concurrence::monogamy::{check_theorem1, theorem4_bound, Theorem4Weights};
use concurrence::states::{antisymmetric_qutrit, pair_reduction, paper_family_2223, paper_state_223};
use concurrence::tensor::{partial_trace, State};
use concurrence::Partition;

use super::scan::scan_point;
use super::Outcome;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::table::Table;

pub struct Row {
    pub quantity: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
}

impl Row {
    fn new(quantity: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        Self { quantity: quantity.into(), expected, computed, tolerance }
    }

    pub fn abs_diff(&self) -> f64 {
        (self.computed - self.expected).abs()
    }

    pub fn pass(&self) -> bool {
        self.abs_diff() <= self.tolerance
    }
}

fn family_pair(t: f64) -> f64 {
    (1.5 * t - 0.5).max(0.0)
}

pub fn rows(cfg: &RunConfig) -> CliResult<Vec<Row>> {
    let opts = cfg.options();
    let cut = |a: Vec<usize>, b: Vec<usize>| Partition::new(a, b);
    let mut rows = Vec::new();

    let psi = paper_state_223();
    rows.push(Row::new("C(A|BC), 2⊗2⊗3 state", 1.0, concurrence_pure(&psi, &cut(vec![0], vec![1, 2])?)?, 1e-12));
    let ab = concurrence_assistance(&psi.reduced(&[0, 1])?, &cut(vec![0], vec![1])?, &opts)?;
    rows.push(Row::new("C_a(ρ_AB), 2⊗2⊗3 state", 1.0, ab.value, 1e-3));
    let ac = concurrence_assistance(&psi.reduced(&[0, 2])?, &cut(vec![0], vec![1])?, &opts)?;
    rows.push(Row::new("C_a(ρ_AC), 2⊗2⊗3 state", 2.0 * 2f64.sqrt() / 3.0, ac.value, 1e-3));
    let t1 = check_theorem1(&psi, 1.0, &opts)?;
    rows.push(Row::new("assistance monogamy margin at x=1, 2⊗2⊗3 state", 0.0, t1.margin, 1e-3));

    let anti = antisymmetric_qutrit();
    let c_split = concurrence_pure(&anti, &cut(vec![0], vec![1, 2])?)?;
    rows.push(Row::new("C(0|12), antisymmetric qutrits", 2.0 / 3f64.sqrt(), c_split, 1e-12));
    rows.push(Row::new("C²(0|12), antisymmetric qutrits", 4.0 / 3.0, c_split * c_split, 1e-9));
    let anti_state = State::Pure(anti);
    let pair_cut = cut(vec![0], vec![1])?;
    let c01 = convex_roof_concurrence(&pair_reduction(&anti_state, 0, 1)?, &pair_cut, &opts)?.value;
    let c02 = convex_roof_concurrence(&pair_reduction(&anti_state, 0, 2)?, &pair_cut, &opts)?.value;
    rows.push(Row::new("C(ρ_01), antisymmetric qutrits", 1.0, c01, 5e-3));
    rows.push(Row::new("C(ρ_02), antisymmetric qutrits", 1.0, c02, 5e-3));
    rows.push(Row::new("C²(ρ_01) + C²(ρ_02), antisymmetric qutrits", 2.0, c01 * c01 + c02 * c02, 2e-2));

    for t in [1.0, 0.5, 0.2] {
        let rho = paper_family_2223(t)?;
        let c = concurrence_two_qubit(&partial_trace(&rho, &[0, 1])?)?;
        rows.push(Row::new(format!("C(ρ_01), 2⊗2⊗2⊗3 family, t={t}"), family_pair(t), c, 1e-12));
    }
    let bound = theorem4_bound(&State::Mixed(paper_family_2223(1.0)?), &Theorem4Weights::paper_choice(), &opts)?;
    rows.push(Row::new("four-partite bound on C², 2⊗2⊗2⊗3 family, t=1", 1.0, bound.aggregated, 1e-9));
    for t in [1.0 / 3.0, 0.4, 0.7, 1.0] {
        let p = scan_point(t, false, &opts)?;
        let label = if t == 1.0 / 3.0 { "1/3".to_string() } else { t.to_string() };
        rows.push(Row::new(format!("scan lower bound on C, t={label}"), family_pair(t), p.lower_bound, 1e-9));
    }
    Ok(rows)
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let rows = rows(cfg)?;
    let mut table = Table::new(&["quantity", "expected", "computed", "abs_diff", "tolerance", "pass"]);
    for r in &rows {
        table.push(
            vec![r.quantity.clone().into(), r.expected.into(), r.computed.into(), r.abs_diff().into(), r.tolerance.into(), r.pass().into()],
            Vec::new(),
        );
    }
    let ok = rows.iter().all(Row::pass);
    Ok(Outcome { table, ok })
}
