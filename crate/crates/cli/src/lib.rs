//! Command-line front end for the `concurrence` library: measures, inequality
//! checks, family scans, fuzz suites and the reference value table.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::io::Write;

use config::RunConfig;
use error::CliResult;

/// Runs `cfg`, writes its output, and returns whether every check passed.
pub fn execute(cfg: &RunConfig, save_config: Option<&std::path::Path>) -> CliResult<bool> {
    if let Some(path) = save_config {
        std::fs::write(path, serde_json::to_string_pretty(cfg)? + "\n")?;
    }
    let outcome = commands::run(cfg)?;
    match &cfg.output {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            outcome.table.write(cfg.format, &mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            outcome.table.write(cfg.format, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(outcome.ok)
}
