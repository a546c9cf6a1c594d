//! Batch command-line harness for `repliq-core`: run configuration,
//! bit-stable CSV/JSON output and replayable run records.

pub mod args;
pub mod config;
pub mod csvio;
pub mod error;
pub mod run;

use std::path::Path;

pub use args::Cli;
pub use config::{CommandConfig, OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use run::{execute, replay, Results, RunRecord};

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command line end to end, writing output where requested.
pub fn run_cli(cli: Cli) -> Result<()> {
    if let args::Command::Replay { record } = &cli.command {
        let recorded = RunRecord::from_json(&std::fs::read_to_string(record)?)?;
        let fresh = replay(&recorded)?;
        let text = match cli.format {
            OutputFormat::Json => fresh.to_json()?,
            OutputFormat::Csv => fresh.results.to_csv(),
        };
        return emit(&text, cli.out.as_deref());
    }
    let config = cli.into_config()?.expect("non-replay commands carry a configuration");
    let out = config.output_path.clone();
    let record = RunRecord::run(config)?;
    emit(&record.render()?, out.as_deref())
}
