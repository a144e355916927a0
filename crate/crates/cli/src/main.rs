//! `suv` — config-driven simulations of quantum state reduction through
//! spontaneous unitarity violation.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

mod commands;
mod config;
mod output;
mod svg;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid config: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            CliError::Io(msg) => write!(f, "io failure: {msg}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "suv",
    version,
    about = "Collapse-model simulator: trajectories, ensembles, sweeps and field histograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON config file; built-in defaults apply when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed override
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory override
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Also emit SVG plots
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write the weight time series
    Trajectory,
    /// Run a trajectory ensemble and write the outcome report and
    /// Born-deviation series
    Ensemble,
    /// Run one ensemble per dt or eta value
    Sweep,
    /// Histogram the random field value at a fixed position
    FieldPdf,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = config::load_config(cli.config.as_ref(), cli.seed, cli.out.as_ref(), cli.svg)?;
    let validated = config.validate()?;
    match cli.command {
        Command::Trajectory => commands::cmd_trajectory(&validated),
        Command::Ensemble => commands::cmd_ensemble(&validated),
        Command::Sweep => commands::cmd_sweep(&validated),
        Command::FieldPdf => commands::cmd_field_pdf(&validated),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
