//! `bqlab`: witness data, resonance checks, growth sweeps, simulations and
//! the acceptance run from one binary.
//!
//! Exit status is 0 on success, 1 on invalid input or a failed check, and 2
//! when a combinatorial or quadrature budget is exhausted.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::List;

#[derive(Parser, Debug)]
#[command(name = "bqlab", version, about = "Flow-map smoothness laboratory for the Boussinesq equation")]
struct Cli {
    /// Flat `key = value` file; command-line flags take precedence over it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build witness initial data and write it as JSON.
    Witness(WitnessArgs),
    /// Enumerate representations and check the sign and size of β.
    Resonance(ResonanceArgs),
    /// Solve the class-count system for odd p and compare with the closed forms.
    Diophantine(DiophantineArgs),
    /// Sweep N and fit the growth exponent of the p-th derivative.
    Growth(GrowthArgs),
    /// Integrate the equation from a JSON initial state.
    Simulate(SimulateArgs),
    /// Norm-inflation experiment for p = 2 on the torus.
    Inflate(InflateArgs),
    /// Run every acceptance criterion and print a summary table.
    ReproduceAll(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long = "N")]
    pub n: Option<u64>,
    /// Sobolev index; the amplitude exponent defaults to `s + 1`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub nodes_per_unit: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ResonanceArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long = "N-list")]
    pub n_list: Option<List<u64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DiophantineArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GrowthArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    /// One or more measurement times; several write one table per time.
    #[arg(long)]
    pub t: Option<List<f64>>,
    #[arg(long = "N-list")]
    pub n_list: Option<List<u64>>,
    /// Monte Carlo samples per pattern, switching the line rule to Monte Carlo.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub p: Option<u32>,
    /// `+` or `-`, the sign in `f(u) = ±u^p`.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<String>,
    #[arg(long = "K")]
    pub k: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Witness JSON as written by `bqlab witness` (torus data).
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Sobolev indices at which norms are recorded.
    #[arg(long, allow_hyphen_values = true)]
    pub s_values: Option<List<f64>>,
    /// Mode band `lo,hi` for the windowed norms.
    #[arg(long)]
    pub window: Option<List<usize>>,
    /// Record every this many steps.
    #[arg(long)]
    pub every: Option<usize>,
    /// `padded` or `none`.
    #[arg(long)]
    pub dealias: Option<String>,
    /// Drop the nonlinearity.
    #[arg(long)]
    pub linear: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InflateArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long = "N-list")]
    pub n_list: Option<List<u64>>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub k_factor: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// Subset of criterion ids.
    #[arg(long)]
    pub only: Option<List<u32>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let resource = err
        .chain()
        .filter_map(|c| c.downcast_ref::<boussinesq_lab::Error>())
        .any(|e| e.is_resource());
    if resource {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = config::Settings::load(cli.config.as_deref()).and_then(|settings| match cli.command {
        Command::Witness(a) => commands::witness(a, settings),
        Command::Resonance(a) => commands::resonance(a, settings),
        Command::Diophantine(a) => commands::diophantine(a, settings),
        Command::Growth(a) => commands::growth(a, settings),
        Command::Simulate(a) => commands::simulate(a, settings),
        Command::Inflate(a) => commands::inflate(a, settings),
        Command::ReproduceAll(a) => commands::reproduce_all(a, settings),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
