use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod state;

use state::StateArgs;

const THREADS_ENV: &str = "CVBELL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cvbell", version, about = "CHSH violation with binned quadrature measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SvalueArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Cross-check the closed forms against brute-force correlators.
    #[arg(long)]
    brute_force: bool,
    #[arg(long, value_parser = state::positive, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Directory for the four data files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Samples per file; rounded up to an odd count so that 0 is on the grid.
    #[arg(long, default_value_t = 2001, value_parser = clap::value_parser!(u32).range(3..))]
    points: u32,
    /// Half-width of the sampled range; defaults to the evaluation window.
    #[arg(long, value_parser = state::positive)]
    extent: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    G,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theta {
    Optimal,
    Value(f64),
}

fn parse_theta(raw: &str) -> std::result::Result<Theta, String> {
    if raw == "optimal" {
        return Ok(Theta::Optimal);
    }
    match raw.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Theta::Value(x)),
        _ => Err(format!("expected a number or 'optimal', got {raw}")),
    }
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    #[arg(long, value_enum)]
    protocol: Protocol,
    /// Doubling rounds; the cat has 2^(n+1) paws.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    n: u32,
    #[arg(long, value_parser = state::positive)]
    alpha: f64,
    #[arg(long, value_parser = parse_theta, default_value = "optimal", allow_hyphen_values = true)]
    theta: Theta,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Flat cats at α = 15 for N = 2..12.
    Table1(TableArgs),
    /// Envelope cats at s = 0.3 with optimized α for N = 4..12.
    Table2(TableArgs),
    /// V, W, θm and S for one state.
    Svalue(SvalueArgs),
    /// Position and momentum profiles as two-column files.
    Plotdata(PlotArgs),
    /// Simulate the qubit-assisted preparation protocols.
    Prepsim(PrepArgs),
}

fn configure_threads() -> Result<()> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw.trim().parse().with_context(|| format!("{THREADS_ENV} must be a positive integer"))?;
        anyhow::ensure!(n > 0, "{THREADS_ENV} must be a positive integer");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Table1(args) => commands::table1(&args),
        Command::Table2(args) => commands::table2(&args),
        Command::Svalue(args) => commands::svalue(&args),
        Command::Plotdata(args) => commands::plotdata(&args),
        Command::Prepsim(args) => commands::prepsim(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
