use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use oshima_cli::config::{default_config, ExperimentConfig};
use oshima_cli::experiments::{run_character_experiment, run_fixed_point_report, run_structure_report};
use oshima_cli::report::{emit, Report};
use oshima_cli::verify::{run_criterion, Settings};

#[derive(Parser)]
#[command(
    name = "oshima",
    version,
    about = "Fixed points and character formulae on the Oshima compactification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment descriptor (JSON); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Gauss–Legendre panels per axis.
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Roots, parabolic data, orbit census and Weyl/M lists of sl(n).
    Structure {
        #[command(flatten)]
        common: Common,
        /// Rank, overriding the config.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Fixed points with both determinants of det(1 - dl).
    FixedPoints {
        #[command(flatten)]
        common: Common,
    },
    /// Direct vs fixed-point side of the character formula.
    Character {
        #[command(flatten)]
        common: Common,
        /// Also write the comparison table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the Haar quadrature nodes as CSV.
        #[arg(long)]
        grid_csv: Option<PathBuf>,
    },
    /// Runs the acceptance suite.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

const EXIT_FAILED: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn load(command: &str, common: &Common) -> Result<ExperimentConfig> {
    let config = match &common.config {
        Some(path) => {
            let config = ExperimentConfig::load(path)?;
            if config.command() != command {
                bail!("config is for `{}`, not `{command}`", config.command());
            }
            config
        }
        None => default_config(command)?,
    };
    config.with_resolution(common.resolution)
}

fn finish<T: serde::Serialize>(config: &ExperimentConfig, passed: bool, result: T, out: Option<&Path>) -> Result<bool> {
    emit(&Report::new(config, passed, result).to_json(), out)?;
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Structure { common, n } => {
            let mut config = load("structure", &common)?;
            if let (Some(n), ExperimentConfig::Structure(c)) = (n, &mut config) {
                c.n = n;
                config.validate()?;
            }
            let ExperimentConfig::Structure(c) = &config else {
                unreachable!()
            };
            let result = run_structure_report(c)?;
            finish(&config, true, result, common.out.as_deref())
        }
        Command::FixedPoints { common } => {
            let config = load("fixed-points", &common)?;
            let ExperimentConfig::FixedPoints(c) = &config else {
                unreachable!()
            };
            let cases = run_fixed_point_report(c);
            let passed = cases.iter().all(|c| c.passed());
            finish(&config, passed, cases, common.out.as_deref())
        }
        Command::Character { common, csv, grid_csv } => {
            let config = load("character", &common)?;
            let ExperimentConfig::Character(c) = &config else {
                unreachable!()
            };
            let run = run_character_experiment(c)?;
            for (label, elapsed) in &run.timings {
                eprintln!("{label}: {:.2} s", elapsed.as_secs_f64());
            }
            if let Some(path) = csv {
                emit(&run.result.to_csv(), Some(&path))?;
            }
            if let Some(path) = grid_csv {
                emit(&run.grids_csv(), Some(&path))?;
            }
            let passed = run.result.passed();
            finish(&config, passed, run.result, common.out.as_deref())
        }
        Command::Verify { common } => {
            let config = load("verify", &common)?;
            let ExperimentConfig::Verify(c) = &config else {
                unreachable!()
            };
            let settings = Settings::from(c);
            let outcomes: Vec<_> = c
                .criteria
                .iter()
                .map(|&id| {
                    let outcome = run_criterion(id, &settings);
                    eprintln!("{}", outcome.summary());
                    outcome
                })
                .collect();
            let passed = outcomes.iter().all(|o| o.passed);
            finish(&config, passed, outcomes, common.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
