use std::process::ExitCode;

use clap::Parser;
use dyckinfo::cli::{emit, run_experiment, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_experiment(&cli).and_then(|o| emit(&cli, &o.report).map(|_| o.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::to_string(&e.record()).unwrap_or_else(|_| e.to_string())
            );
            ExitCode::from(2)
        }
    }
}
