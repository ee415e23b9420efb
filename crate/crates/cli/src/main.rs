use std::process::ExitCode;

use clap::Parser;
use concurrence_cli::config::{Cli, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let save = cli.global.save_config.clone();
    let result = RunConfig::from_cli(cli).and_then(|cfg| concurrence_cli::execute(&cfg, save.as_deref()));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
