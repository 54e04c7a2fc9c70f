//! `tsfrac` command-line front end.

mod commands;
mod error;
mod output;
mod problem;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;
use crate::problem::CommonArgs;

#[derive(Debug, Parser)]
#[command(
    name = "tsfrac",
    version,
    about = "Fractional integrals, derivatives and initial value problems on time scales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the fractional integral of h
    Fracint(OpArgs),
    /// Evaluate the fractional derivative of h
    Fracderiv(OpArgs),
    /// Solve the initial value problem by Picard iteration
    Solve(SolveArgs),
    /// Check the contraction and boundedness hypotheses
    Check(CheckArgs),
    /// Mass function, contraction bound and a demonstration solve for
    /// z(t) = t^2 on {0} u 2^Z
    #[command(name = "reproduce-example4")]
    ReproduceExample4(ExampleArgs),
    /// Describe a time scale
    TsInfo(TsInfoArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OpArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Integrand h(t)
    #[arg(long, value_name = "EXPR")]
    h: Option<String>,
    /// Evaluation points (comma separated)
    #[arg(long, value_delimiter = ',')]
    at: Option<Vec<f64>>,
    /// Compare with exact sums on discrete parts
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Right-hand side f(t, y)
    #[arg(long, value_name = "EXPR")]
    f: Option<String>,
    /// Lipschitz constant of f in y (probed when absent)
    #[arg(long)]
    lipschitz: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Nodes per continuous segment
    #[arg(long)]
    nodes: Option<usize>,
    /// Compare with a product-integration solve
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_name = "EXPR")]
    f: Option<String>,
    #[arg(long)]
    lipschitz: Option<f64>,
    #[arg(long)]
    nodes: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ExampleArgs {
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Lipschitz constants for the bound table (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    lipschitz: Vec<f64>,
    /// Constant right-hand side of the demonstration solve
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TsInfoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Points to describe (default: every landmark)
    #[arg(long, value_delimiter = ',')]
    at: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Fracint(a) => commands::fracop(a, false),
        Command::Fracderiv(a) => commands::fracop(a, true),
        Command::Solve(a) => commands::solve(a),
        Command::Check(a) => commands::check(a),
        Command::ReproduceExample4(a) => commands::reproduce_example4(a),
        Command::TsInfo(a) => commands::ts_info(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
