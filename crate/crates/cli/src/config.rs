//! Command-line arguments and the serializable run configuration they map to.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use concurrence::states::StateSpec;
use concurrence::{Partition, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::table::Format;

#[derive(Debug, Parser)]
#[command(name = "concurrence", version, about = "Concurrence measures and monogamy bounds for multipartite states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format; scan defaults to csv, everything else to human.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, env = "CONCURRENCE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Optimizer restarts (default: 64 for total dimension ≤ 16, else 256).
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Inequality slack replacing both defaults. Negative values demand a
    /// strictly positive margin.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tolerance: Option<f64>,
    /// Also write the run configuration as JSON to this path.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Compute a measure of one state.
    Measure {
        #[command(flatten)]
        state: StateArgs,
        /// Cut such as `0|1,2`; defaults to party 0 against the rest.
        #[arg(long)]
        cut: Option<Partition>,
        #[arg(long, value_enum, default_values_t = [Quantity::Concurrence])]
        quantity: Vec<Quantity>,
    },
    /// Evaluate a monogamy inequality or bound.
    Check {
        #[arg(value_enum)]
        inequality: Inequality,
        #[command(flatten)]
        state: StateArgs,
        /// Two-term weight; repeat for several rows.
        #[arg(long)]
        x: Vec<f64>,
        /// Comma-separated weights, one per party after the first.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        /// Search all weight vertices for the largest bound.
        #[arg(long, conflicts_with = "paper_weights")]
        optimize: bool,
        /// Four-partite weights that reduce the bound to C²(ρ₀₁).
        #[arg(long)]
        paper_weights: bool,
        /// Skip the left side of the four-partite bound on mixed input.
        #[arg(long)]
        bound_only: bool,
    },
    /// Evaluate the four-partite lower bound along the 2⊗2⊗2⊗3 family.
    Scan {
        #[arg(long, default_value = "paper-2223")]
        family: String,
        #[arg(long, default_value_t = 0.33)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        /// Grid points including both ends.
        #[arg(long, default_value_t = 68)]
        points: usize,
        /// Explicit grid; overrides from/to/points.
        #[arg(long, value_delimiter = ',')]
        t: Option<Vec<f64>>,
        /// Add a column with the vertex-optimized bound.
        #[arg(long)]
        optimize: bool,
    },
    /// Run an invariant suite on random states.
    Fuzz {
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Rank of random mixed states; random in 1..=total when absent.
        #[arg(long)]
        rank: Option<usize>,
        /// Directory for failure artifacts.
        #[arg(long, default_value = "fuzz-artifacts")]
        artifact_dir: PathBuf,
        /// Re-run a single failure artifact.
        #[arg(long, conflicts_with_all = ["suite", "dims"])]
        replay: Option<PathBuf>,
    },
    /// Recompute every value quoted in the reference examples.
    Reproduce,
    /// Run a saved configuration.
    Run { config: PathBuf },
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Catalog name, e.g. bell, ghz, paper-223, paper-2223, haar.
    #[arg(long)]
    pub state: String,
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Shorthand for `--param t=…`.
    #[arg(long)]
    pub t: Option<f64>,
    /// Numeric state parameter `key=value`; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("parameter {k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}

impl StateArgs {
    pub fn spec(&self) -> StateSpec {
        let mut spec = StateSpec::named(&self.state);
        for (k, v) in &self.params {
            spec = spec.with(k, *v);
        }
        if let Some(t) = self.t {
            spec = spec.with("t", t);
        }
        if let Some(d) = &self.dims {
            spec = spec.with_dims(d.clone());
        }
        spec
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Closed form for pure states, convex roof otherwise.
    Concurrence,
    Roof,
    Assistance,
    CoaUpper,
    TwoQubit,
    FourPartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    Theorem1,
    Theorem2,
    Corollary,
    Ckw,
    DualCoa,
    Theorem3,
    Theorem4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Weighted mixed-state monogamy at x ∈ {0, 1} on Haar pure triples.
    Theorem2,
    /// Weighted assistance monogamy at x ∈ {0, 1} on Haar pure triples.
    Theorem1,
    /// Assistance estimate never above the purity cap, random mixed pairs.
    Lemma1,
    /// Qubit monogamy on Haar pure qubit states.
    Ckw,
    /// Dual assistance bound on Haar pure qubit states.
    DualCoa,
    /// Four-partite aggregated vs cut-by-cut bound on random weights.
    Aggregation,
    /// Vertex-optimized four-partite bound on Haar pure states.
    Theorem4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightChoice {
    Uniform,
    Optimize,
    Paper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandConfig {
    Measure {
        state: StateSpec,
        cut: Option<Partition>,
        quantities: Vec<Quantity>,
    },
    Check {
        inequality: Inequality,
        state: StateSpec,
        x: Vec<f64>,
        p: Option<Vec<f64>>,
        weights: WeightChoice,
        bound_only: bool,
    },
    Scan {
        family: String,
        grid: Vec<f64>,
        optimize: bool,
    },
    Fuzz {
        suite: Suite,
        dims: Vec<usize>,
        count: usize,
        rank: Option<usize>,
        artifact_dir: PathBuf,
    },
    Replay {
        artifact: PathBuf,
    },
    Reproduce,
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: CommandConfig,
    pub seed: u64,
    pub restarts: Option<usize>,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let g = cli.global;
        let command = match cli.command {
            CommandArgs::Run { config } => {
                let text = std::fs::read_to_string(&config)?;
                let mut cfg: RunConfig = serde_json::from_str(&text)?;
                // Flags given next to `run` override the saved values.
                if let Some(f) = g.format {
                    cfg.format = f;
                }
                if g.output.is_some() {
                    cfg.output = g.output;
                }
                return Ok(cfg);
            }
            CommandArgs::Measure { state, cut, quantity } => {
                CommandConfig::Measure { state: state.spec(), cut, quantities: quantity }
            }
            CommandArgs::Check { inequality, state, x, p, optimize, paper_weights, bound_only } => {
                let weights = match (optimize, paper_weights) {
                    (true, _) => WeightChoice::Optimize,
                    (_, true) => WeightChoice::Paper,
                    _ => WeightChoice::Uniform,
                };
                CommandConfig::Check { inequality, state: state.spec(), x, p, weights, bound_only }
            }
            CommandArgs::Scan { family, from, to, points, t, optimize } => {
                let grid = match t {
                    Some(t) => t,
                    None => linear_grid(from, to, points)?,
                };
                CommandConfig::Scan { family, grid, optimize }
            }
            CommandArgs::Fuzz { replay: Some(artifact), .. } => CommandConfig::Replay { artifact },
            CommandArgs::Fuzz { suite, dims, count, rank, artifact_dir, replay: None } => CommandConfig::Fuzz {
                suite: suite.ok_or_else(|| CliError::Usage("fuzz needs --suite or --replay".into()))?,
                dims: dims.ok_or_else(|| CliError::Usage("fuzz needs --dims".into()))?,
                count,
                rank,
                artifact_dir,
            },
            CommandArgs::Reproduce => CommandConfig::Reproduce,
        };
        let default_format = match command {
            CommandConfig::Scan { .. } => Format::Csv,
            _ => Format::Human,
        };
        Ok(RunConfig {
            command,
            seed: g.seed,
            restarts: g.restarts,
            tolerance: g.tolerance,
            format: g.format.unwrap_or(default_format),
            output: g.output,
        })
    }

    pub fn options(&self) -> concurrence::measures::OptimizerOptions {
        let mut tol = Tolerances::default();
        if let Some(slack) = self.tolerance {
            tol = tol.with_inequality(slack);
        }
        let mut opts = concurrence::measures::OptimizerOptions::new(self.seed).with_tolerances(tol);
        opts.restarts = self.restarts;
        opts
    }
}

/// `points` values from `from` to `to` inclusive, rounded to 12 decimals so
/// that a 0.01 grid prints as 0.01 steps.
pub fn linear_grid(from: f64, to: f64, points: usize) -> CliResult<Vec<f64>> {
    if points == 0 {
        return Err(CliError::Usage("scan grid is empty".into()));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points).map(|i| ((from + step * i as f64) * 1e12).round() / 1e12).collect())
}
