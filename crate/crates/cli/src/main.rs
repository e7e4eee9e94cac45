#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod curvature_file;
mod parallel;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::report::Report;
use crate::suites::Suite;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{origin}:{line}: {message}")]
    Malformed { origin: String, line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(name = "getzler", version, about = "Identity checks for Getzler rescaling and spin-bundle heat kernels")]
struct Cli {
    /// Record wall time in the report (reports are then not reproducible byte for byte).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Â-form of a curvature file, checked against the power-series oracle.
    Ahat {
        file: PathBuf,
        /// Report only coefficients of this form degree.
        #[arg(long)]
        degree: Option<usize>,
        /// Also report the index density.
        #[arg(long)]
        density: bool,
    },
    /// Mehler kernel at a point and time.
    Mehler {
        file: PathBuf,
        /// Point as comma-separated components.
        #[arg(long = "v", value_delimiter = ',', allow_negative_numbers = true, required = true)]
        v: Vec<f64>,
        #[arg(long)]
        t: f64,
    },
    /// Run an invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Worker threads for independent checks.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    match cli.command {
        Command::Ahat { file, degree, density } => Ok(commands::ahat(&file, degree, density)?),
        Command::Mehler { file, v, t } => Ok(commands::mehler(&file, &v, t)?),
        Command::Verify { suite, seed, n, jobs } => {
            if jobs == 0 {
                return Err(InputError::Usage("--jobs must be at least 1".into()).into());
            }
            let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
            Ok(pool.install(|| suites::verify(suite, seed, n))?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let timing = cli.timing;
    let start = Instant::now();
    match run(cli) {
        Ok(mut report) => {
            if timing {
                report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
            }
            print!("{}", report.to_json());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
