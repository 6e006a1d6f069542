//! Command-line front end for `varbound`.
//!
//! Exit statuses: 0 success, 1 input error, 2 invariant violation,
//! 3 counterexample search found nothing.

pub mod commands;
pub mod error;
pub mod output;
pub mod problem;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use varbound::sampler::SampleConfig;

use commands::{ScenarioKind, ScenarioOptions};
pub use error::{CliError, Exit};
use output::Format;
use problem::Problem;

#[derive(Debug, Parser)]
#[command(
    name = "varbound",
    version,
    about = "Variance uncertainty bounds for pairs of Hermitian observables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every bound for the problem's state
    Check {
        /// Problem file, or a built-in: pauli-xy-equator, pauli-xz-eigenstate
        problem: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a named scenario and its checks
    Scenario {
        #[arg(value_enum)]
        name: ScenarioKind,
        problem: String,
        /// Eigenvector of B (ascending order) for the eigenstate scenario
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, env = "VARBOUND_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of random starts for the search
        #[arg(long, default_value_t = varbound::tol::DEFAULT_STARTS)]
        starts: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Batch scans writing CSV and a JSON summary
    Scan {
        #[command(subcommand)]
        kind: ScanKind,
    },
    /// Run the invariant suites at reduced sample counts
    Selftest {
        /// Inject a known defect; the run must then fail
        #[arg(long, value_enum)]
        mutate: Option<selftest::Mutation>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScanKind {
    /// Bound tightness over random GUE pairs and Haar states
    Haar {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, env = "VARBOUND_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bounds along a path from a random state to an eigenvector of B
    Approach {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        index: Option<usize>,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, env = "VARBOUND_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, CliError> {
    match cli.command {
        Command::Check { problem, format } => commands::check(&Problem::load(&problem)?, format, out),
        Command::Scenario {
            name,
            problem,
            index,
            seed,
            starts,
            format,
        } => {
            let opts = ScenarioOptions { index, seed, starts };
            commands::scenario(name, &Problem::load(&problem)?, opts, format, out)
        }
        Command::Scan { kind } => match kind {
            ScanKind::Haar {
                dim,
                samples,
                seed,
                out: dir,
            } => {
                let cfg = SampleConfig {
                    dim,
                    n_samples: samples,
                    seed,
                };
                commands::scan_haar(cfg, &dir, out)
            }
            ScanKind::Approach {
                problem,
                index,
                steps,
                seed,
                out: dir,
            } => commands::scan_approach(&Problem::load(&problem)?, index, steps, seed, &dir, out),
        },
        Command::Selftest { mutate } => selftest::run(mutate, out, err),
    }
}

/// Parse `args`, run, report errors on `err`, and return the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    Exit::Ok.code()
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    Exit::Input.code()
                }
            };
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code.code(),
        Err(e) => {
            let _ = writeln!(err, "varbound: {e}");
            e.exit().code()
        }
    }
}
