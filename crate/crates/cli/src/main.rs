//! `stablekernel` command-line front end.
//!
//! Exit codes: 0 success, 1 certification failed, 2 domain or usage error,
//! 3 numerical non-convergence.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{Check, CommonArgs, Extra, Op, RunConfig, Study};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    CertFailed = 1,
    Domain = 2,
    NoConvergence = 3,
}

impl From<&stablekernel::Error> for Exit {
    fn from(e: &stablekernel::Error) -> Self {
        match e {
            stablekernel::Error::NoConvergence { .. } => Exit::NoConvergence,
            stablekernel::Error::ThresholdNotFound { .. } => Exit::CertFailed,
            _ => Exit::Domain,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError { exit: Exit::Domain, message: msg.into() }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        CliError { exit: Exit::Domain, message: msg.into() }
    }
}

impl From<stablekernel::Error> for CliError {
    fn from(e: stablekernel::Error) -> Self {
        CliError { exit: Exit::from(&e), message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "stablekernel", version, about = "Isotropic stable densities, fractional derivatives and their tails")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// g, Δ_κ g and ∇_κ g at the requested points.
    Eval {
        /// Point(s) x as comma-separated coordinates; overrides --radius.
        #[arg(long, allow_hyphen_values = true)]
        x: Vec<String>,
    },
    /// Large-|x| tail constants of D(κ, ·) and N(κ, ·).
    Constants,
    /// Certification of the two-sided estimates.
    Certify {
        #[arg(long, value_enum)]
        check: Option<Check>,
        /// Operator for threshold scans.
        #[arg(long, value_enum)]
        op: Option<Op>,
        /// Largest radius of a threshold scan.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Quadrature convergence and ratio-to-asymptote study.
    Convergence {
        #[arg(long, value_enum)]
        study: Option<Study>,
        #[arg(long, value_enum)]
        op: Option<Op>,
        /// Tolerances of a tol study, comma separated.
        #[arg(long, value_delimiter = ',')]
        tols: Vec<f64>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let common = cli.common;
    let extra = match &cli.command {
        Command::Eval { x } => Extra { x: x.clone(), ..Extra::default() },
        Command::Constants => Extra::default(),
        Command::Certify { check, op, budget } => {
            Extra { check: *check, op: *op, budget: *budget, ..Extra::default() }
        }
        Command::Convergence { study, op, tols } => {
            Extra { study: *study, op: *op, tols: tols.clone(), ..Extra::default() }
        }
    };
    let cfg = RunConfig::resolve(common, extra)?;
    let outcome = match cli.command {
        Command::Eval { .. } => commands::cmd_eval(&cfg),
        Command::Constants => commands::cmd_constants(&cfg),
        Command::Certify { .. } => commands::cmd_certify(&cfg),
        Command::Convergence { .. } => commands::cmd_convergence(&cfg),
    }?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.csv)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.csv.as_bytes()).and_then(|_| out.flush()).ok();
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            if outcome.exit != Exit::Ok {
                eprintln!("stablekernel: finished with exit status {}", outcome.exit as u8);
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("stablekernel: {}", e.message);
            ExitCode::from(e.exit as u8)
        }
    }
}
