//! `graphlabel`: generators, scheme builders, evaluators and experiment
//! reports from the command line.

mod bench;
mod commands;
mod config;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use config::{Cli, RunConfig};

const EXIT_FAILED: u8 = 2;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if cli.command.is_none() && cli.config.is_none() {
        eprintln!(
            "error: no subcommand given\n\n{}",
            Cli::command().render_usage()
        );
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}

/// Returns whether every check the command performs passed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    let config = RunConfig::resolve(cli)?;
    if let Some(jobs) = config.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()?;
    }
    if let Some(path) = &config.save_config {
        config.save(path)?;
    }
    let outcome = commands::dispatch(&config)?;
    report::emit(&outcome, &config)?;
    Ok(outcome.passed)
}
