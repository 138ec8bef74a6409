//! `bigraphgen`: generate random bigraphs, run experiment campaigns and
//! analyze stored documents.
//!
//! Exit codes: 0 success, 1 invalid input or arguments, 2 failure to write
//! results.

mod analyze;
mod experiment;
mod generate;
mod output;
mod pipeline;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "bigraphgen", version, about = "Random bigraph generator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate one bigraph document.
    Generate(generate::GenerateArgs),
    /// Run a batch of generations over a parameter grid.
    Experiment(experiment::ExperimentArgs),
    /// Validate a document and write its metrics.
    Analyze(analyze::AnalyzeArgs),
    /// Check a document against the structural invariants.
    Validate(analyze::ValidateArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Generate(args) => generate::run(args),
        Command::Experiment(args) => experiment::run(args),
        Command::Analyze(args) => analyze::run(args),
        Command::Validate(args) => analyze::validate_cmd(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<output::OutputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
