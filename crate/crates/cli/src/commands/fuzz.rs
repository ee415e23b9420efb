//! Invariant suites over seeded random states, with self-contained replay
//! artifacts for every failing item.

use std::path::{Path, PathBuf};

use concurrence::measures::{coa_upper_bound, concurrence_assistance, OptimizerOptions};
use concurrence::monogamy::{
    check_dual_coa, check_qubit_ckw, optimize_weights, FocusMonogamy, Objective, PairConcurrences, Simplex,
    Theorem4Bound, Theorem4Weights,
};
use concurrence::random::{derive_seed, seeded_rng};
use concurrence::states::{haar_random_pure, random_density};
use concurrence::tensor::State;
use concurrence::{DensityMatrix, DimProfile, Partition, PureState, C64};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{kebab, Outcome};
use crate::config::{CommandConfig, RunConfig, Suite};
use crate::error::{CliError, CliResult};
use crate::table::Table;

/// Random weight draws per state in the aggregation suite.
pub const AGGREGATION_DRAWS: usize = 20;

/// A state in row-major `[re, im]` form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub kind: String,
    pub dims: Vec<usize>,
    pub data: Vec<[f64; 2]>,
}

impl StateDump {
    pub fn of(state: &State) -> Self {
        let dims = state.profile().dims().to_vec();
        match state {
            State::Pure(psi) => Self {
                kind: "pure".into(),
                dims,
                data: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
            },
            State::Mixed(rho) => {
                let m = rho.matrix();
                let data = (0..m.nrows())
                    .flat_map(|i| (0..m.ncols()).map(move |j| [m[(i, j)].re, m[(i, j)].im]))
                    .collect();
                Self { kind: "mixed".into(), dims, data }
            }
        }
    }

    pub fn restore(&self) -> CliResult<State> {
        let profile = DimProfile::new(self.dims.clone())?;
        let values = self.data.iter().map(|&[re, im]| C64::new(re, im));
        match self.kind.as_str() {
            "pure" => Ok(State::Pure(PureState::new(values.collect(), profile)?)),
            "mixed" => {
                let n = profile.total();
                if self.data.len() != n * n {
                    return Err(CliError::Usage(format!("state dump has {} entries, expected {}", self.data.len(), n * n)));
                }
                Ok(State::Mixed(DensityMatrix::new(DMatrix::from_row_iterator(n, n, values), profile)?))
            }
            other => Err(CliError::Usage(format!("unknown state kind `{other}` in dump"))),
        }
    }
}

/// Outcome of one random item.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub passed: bool,
    /// Smallest margin over the item's checks; NaN when a check errored.
    pub margin: f64,
    pub reports: Vec<Value>,
}

/// A failing item, enough to rerun it without the original command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub suite: Suite,
    pub item: usize,
    pub item_seed: u64,
    pub config: RunConfig,
    pub state: StateDump,
    pub reports: Vec<Value>,
}

impl Artifact {
    pub fn to_bytes(&self) -> CliResult<Vec<u8>> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text.into_bytes())
    }
}

pub fn check_dims(suite: Suite, profile: &DimProfile) -> CliResult<()> {
    let n = profile.parties();
    let ok = match suite {
        Suite::Theorem1 | Suite::Theorem2 => n == 3,
        Suite::Lemma1 => n >= 2,
        Suite::Ckw | Suite::DualCoa => n >= 2 && profile.all_qubits(),
        Suite::Aggregation | Suite::Theorem4 => n == 4,
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::Usage(format!("suite {} does not run on {profile}", kebab(&suite))))
    }
}

/// The random input of item `item`: a Haar pure state, or a random mixed
/// state for the Lemma-1 suite and whenever `rank` is given.
pub fn generate(suite: Suite, profile: &DimProfile, rank: Option<usize>, item_seed: u64) -> CliResult<State> {
    let mixed_rank = match (suite, rank) {
        (Suite::Lemma1, None) => Some(1 + (item_seed % profile.total() as u64) as usize),
        (Suite::Theorem2 | Suite::Lemma1, Some(r)) => Some(r),
        _ => None,
    };
    Ok(match mixed_rank {
        Some(r) => State::Mixed(random_density(profile, r, item_seed)?),
        None => State::Pure(haar_random_pure(profile, item_seed)),
    })
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn min_margin(margins: impl IntoIterator<Item = f64>) -> f64 {
    margins.into_iter().fold(f64::INFINITY, f64::min)
}

/// Runs one suite check on `state`. Errors from the library are returned;
/// the caller decides whether they count as failures.
pub fn run_item(suite: Suite, state: &State, item_seed: u64, opts: &OptimizerOptions) -> CliResult<ItemResult> {
    let opts = opts.clone().with_seed(item_seed);
    let from_reports = |reports: Vec<concurrence::monogamy::BoundReport>| ItemResult {
        passed: reports.iter().all(|r| r.satisfied),
        margin: min_margin(reports.iter().map(|r| r.margin)),
        reports: reports.iter().map(to_json).collect(),
    };
    let result = match suite {
        Suite::Theorem1 | Suite::Theorem2 => {
            let input = match (suite, state) {
                (Suite::Theorem1, State::Pure(_)) => state.clone(),
                (Suite::Theorem1, State::Mixed(_)) => {
                    return Err(CliError::Usage("the theorem1 suite needs pure states".into()))
                }
                _ => State::Mixed(state.density()),
            };
            let focus = FocusMonogamy::evaluate(&input, &opts)?;
            from_reports(vec![focus.report_interval(0.0, &opts)?, focus.report_interval(1.0, &opts)?])
        }
        Suite::Lemma1 => {
            let rho = state.density();
            let cut = Partition::versus_rest(vec![0], rho.profile().parties())?;
            let est = concurrence_assistance(&rho, &cut, &opts)?;
            let cap = coa_upper_bound(&rho, &cut)?;
            let tolerance = opts.tolerances.exact_inequality;
            let margin = cap - est.value;
            ItemResult {
                passed: margin >= -tolerance,
                margin,
                reports: vec![json!({
                    "estimate": est.value,
                    "cap": cap,
                    "margin": margin,
                    "tolerance": tolerance,
                    "restarts": est.restarts_used,
                    "converged": est.converged,
                })],
            }
        }
        Suite::Ckw => from_reports(vec![check_qubit_ckw(state, &opts)?]),
        Suite::DualCoa => match state {
            State::Pure(psi) => from_reports(vec![check_dual_coa(psi, &opts)?]),
            State::Mixed(_) => return Err(CliError::Usage("the dual-coa suite needs pure states".into())),
        },
        Suite::Aggregation => {
            let pairs = PairConcurrences::evaluate(state, &opts)?;
            let mut rng = seeded_rng(item_seed, 1);
            let mut reports = Vec::with_capacity(AGGREGATION_DRAWS);
            let mut passed = true;
            let mut margin = f64::INFINITY;
            for _ in 0..AGGREGATION_DRAWS {
                let w = Theorem4Weights::new(
                    std::array::from_fn(|_| Simplex::sample(&mut rng, 3)),
                    std::array::from_fn(|_| Simplex::sample(&mut rng, 4)),
                )?;
                match Theorem4Bound::from_pairs(&pairs, &w) {
                    Ok(b) => {
                        let diff = (b.aggregated - b.derivation).abs();
                        margin = margin.min(-diff);
                        reports.push(json!({ "aggregated": b.aggregated, "derivation": b.derivation, "difference": diff }));
                    }
                    Err(e) => {
                        passed = false;
                        margin = f64::NAN;
                        reports.push(json!({ "weights": to_json(&w), "error": e.to_string() }));
                    }
                }
            }
            ItemResult { passed, margin, reports }
        }
        Suite::Theorem4 => from_reports(vec![optimize_weights(Objective::Theorem4, state, &opts)?.1]),
    };
    Ok(result)
}

/// Items `0..count` of a suite, in order. Item `i` uses seed
/// `derive_seed(seed, i)` for both the state and the optimizer.
pub fn run_suite(
    suite: Suite,
    profile: &DimProfile,
    count: usize,
    rank: Option<usize>,
    seed: u64,
    opts: &OptimizerOptions,
) -> CliResult<Vec<(u64, State, ItemResult)>> {
    check_dims(suite, profile)?;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let item_seed = derive_seed(seed, i as u64);
            let state = generate(suite, profile, rank, item_seed)?;
            let result = run_item(suite, &state, item_seed, opts)?;
            Ok((item_seed, state, result))
        })
        .collect()
}

fn artifact_path(dir: &Path, suite: Suite, dims: &[usize], item: usize) -> PathBuf {
    let dims: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    dir.join(format!("{}-{}-item{item:05}.json", kebab(&suite), dims.join("x")))
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    let CommandConfig::Fuzz { suite, dims, count, rank, artifact_dir } = &cfg.command else {
        unreachable!("dispatched on the fuzz command");
    };
    let profile = DimProfile::new(dims.clone())?;
    let items = run_suite(*suite, &profile, *count, *rank, cfg.seed, &cfg.options())?;

    let mut written = 0usize;
    for (i, (item_seed, state, result)) in items.iter().enumerate() {
        if result.passed {
            continue;
        }
        if written == 0 {
            std::fs::create_dir_all(artifact_dir)?;
        }
        let artifact = Artifact {
            suite: *suite,
            item: i,
            item_seed: *item_seed,
            config: cfg.clone(),
            state: StateDump::of(state),
            reports: result.reports.clone(),
        };
        let path = artifact_path(artifact_dir, *suite, dims, i);
        std::fs::write(&path, artifact.to_bytes()?)?;
        log::info!("wrote {}", path.display());
        written += 1;
    }

    let passed = items.iter().filter(|(_, _, r)| r.passed).count();
    let worst = min_margin(items.iter().map(|(_, _, r)| r.margin));
    let mut table = Table::new(&["suite", "dims", "count", "passed", "failed", "worst_margin", "artifacts"]);
    let artifacts = if written > 0 { artifact_dir.display().to_string() } else { String::new() };
    table.push(
        vec![
            kebab(suite).into(),
            profile.to_string().into(),
            (*count).into(),
            passed.into(),
            (items.len() - passed).into(),
            (if worst.is_finite() { Some(worst) } else { None }).into(),
            artifacts.into(),
        ],
        Vec::new(),
    );
    Ok(Outcome { table, ok: passed == items.len() })
}

/// Reruns an artifact's item from its embedded state and configuration and
/// compares the regenerated artifact with the file byte for byte.
pub fn replay(_cfg: &RunConfig, path: &Path) -> CliResult<Outcome> {
    let original = std::fs::read(path)?;
    let artifact: Artifact = serde_json::from_slice(&original)?;
    let state = artifact.state.restore()?;
    let result = run_item(artifact.suite, &state, artifact.item_seed, &artifact.config.options())?;
    let again = Artifact { reports: result.reports.clone(), ..artifact.clone() };
    let identical = again.to_bytes()? == original;

    let mut table = Table::new(&["suite", "dims", "item", "item_seed", "passed", "margin", "identical"]);
    table.push(
        vec![
            kebab(&artifact.suite).into(),
            state.profile().to_string().into(),
            artifact.item.into(),
            artifact.item_seed.to_string().into(),
            result.passed.into(),
            (if result.margin.is_finite() { Some(result.margin) } else { None }).into(),
            identical.into(),
        ],
        Vec::new(),
    );
    if !identical {
        log::warn!("replayed artifact differs from {}", path.display());
    }
    Ok(Outcome { table, ok: result.passed && identical })
}
