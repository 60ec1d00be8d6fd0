//! `adr`: solve, rate, validate and benchmark adaptive Douglas–Rachford
//! problems.
//!
//! Exit codes: 0 success, 1 configuration error, 2 iteration budget
//! exhausted, 3 validation failure.

mod bench;
mod error;
mod output;
mod params;
mod rates;
mod solve;
mod validate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::params::ParamArgs;

#[derive(Debug, Parser)]
#[command(name = "adr", version, about = "Adaptive Douglas-Rachford splitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the iteration on a problem file and certify the result.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Evaluate a theoretical contraction constant.
    #[command(allow_negative_numbers = true)]
    Rates(RatesArgs),
    /// Run the seeded invariant battery on a problem.
    #[command(allow_negative_numbers = true)]
    Validate(ValidateArgs),
    /// Run a suite of instances and parameter sweeps, one CSV row each.
    #[command(allow_negative_numbers = true)]
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    common: Common,
    /// Write the per-iteration trace (residuals, distances, iterates) as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RatesArgs {
    #[arg(long, value_enum)]
    variant: rates::Variant,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    /// A is skew plus αId (sharper α_J branch).
    #[arg(long)]
    equality_class: bool,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Problem file; the built-in demo problem when absent.
    #[arg(long)]
    problem: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Drop the wall-time column so output is byte-reproducible.
    #[arg(long)]
    omit_timing: bool,
}

/// What a command achieved, mapped onto the exit-code contract.
pub enum Status {
    Ok,
    BudgetExhausted,
    ValidationFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            println!("{}", CliError::new("USAGE", e.kind().to_string()).to_json());
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Rates(args) => rates::run(&args),
        Command::Validate(args) => validate::run(&args),
        Command::Bench(args) => bench::run(&args),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::BudgetExhausted) => ExitCode::from(2),
        Ok(Status::ValidationFailed) => ExitCode::from(3),
        Err(e) => {
            println!("{}", e.to_json());
            ExitCode::from(1)
        }
    }
}
