//! `boole-lab`: reproducible experiments with file-based output.
//!
//! Every run writes its results plus a `run.json` manifest into `--out`.
//! Exit codes: 0 success, 2 input error, 3 limit or configuration error,
//! 4 domain error.

mod commands;
mod error;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use boole_core::quantum::Spin;
use boole_core::Limits;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "boole-lab", version, about = "Correlation polytopes, the elliptope, LHV raffles and spin singlets")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Output directory, created if absent.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Tolerance override for membership and saturation checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Limits, e.g. `events=16,vertices=40,dim=10,spin=4,k=9`.
    #[arg(long, global = true)]
    pub limits: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truth table and facet inequalities of an event system (JSON file).
    Boole(commands::BooleArgs),
    /// Facets of a two-party Bell scenario, with Bell-type facets flagged.
    Bell(commands::BellArgs),
    /// Classify, sample or mesh the elliptope.
    #[command(subcommand)]
    Elliptope(commands::ElliptopeCommand),
    /// Local hidden-variable region for k values per variable.
    Raffle(commands::RaffleArgs),
    /// Spin-singlet saturation, direction sweeps and sum observables.
    #[command(subcommand)]
    Quantum(commands::QuantumCommand),
}

/// Parses `events=16,vertices=40,dim=10,spin=4,k=9`; omitted keys keep defaults.
pub fn parse_limits(spec: &str) -> CliResult<Limits> {
    let mut limits = Limits::default();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("limit {part:?} is not key=value")))?;
        let int = || {
            value
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::Input(format!("limit {key} needs a nonnegative integer, got {value:?}")))
        };
        match key.trim() {
            "events" => limits.max_events = int()?,
            "vertices" => limits.max_vertices = int()?,
            "dim" => limits.max_dim = int()?,
            "k" => limits.max_k = int()?,
            "spin" => {
                let open = Limits {
                    max_twice_spin: u32::MAX,
                    ..Limits::default()
                };
                limits.max_twice_spin = Spin::parse(value, &open)
                    .map_err(|e| CliError::Input(e.to_string()))?
                    .twice();
            }
            other => return Err(CliError::Input(format!("unknown limit {other:?}"))),
        }
    }
    Ok(limits)
}

fn run(cli: Cli) -> CliResult<()> {
    let g = &cli.global;
    if let Some(t) = g.tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Input(format!("--tol must be a finite nonnegative number, got {t}")));
        }
    }
    let limits = match &g.limits {
        Some(s) => parse_limits(s)?,
        None => Limits::default(),
    };
    match cli.command {
        Command::Boole(a) => commands::boole(g, &limits, a),
        Command::Bell(a) => commands::bell(g, &limits, a),
        Command::Elliptope(c) => commands::elliptope(g, &limits, c),
        Command::Raffle(a) => commands::raffle(g, &limits, a),
        Command::Quantum(c) => commands::quantum(g, &limits, c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("boole-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
