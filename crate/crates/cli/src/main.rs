//! `mosqdyn`: simulate orbits, classify parameters, sweep phase diagrams,
//! run certification suites and compare with the continuous model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or parameters (exit 2).
    Usage(String),
    /// I/O failure (exit 3).
    Io(String),
    /// A certificate failed or a sweep disagreed (exit 4).
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<mosqdyn::Error> for CliError {
    fn from(e: mosqdyn::Error) -> Self {
        use mosqdyn::Error as E;
        match e {
            E::Io(err) => CliError::Io(err.to_string()),
            E::Verification(m) => CliError::Check(m),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "mosqdyn", version, about = "Discrete-time mosquito population dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate one orbit and report its verdict.
    Simulate(SimulateArgs),
    /// Spectral type of the origin and the threshold r0, as JSON.
    Classify(ClassifyArgs),
    /// Grid over (alpha, beta, mu): spectral type against simulated verdict.
    Sweep(SweepArgs),
    /// Run the invariant and periodicity certificates.
    Certify(CertifyArgs),
    /// Discrete orbit next to the continuous trajectory.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Flat key=value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub d0: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StartArgs {
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub y0: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    /// Maximum number of iterations.
    #[arg(long)]
    pub steps: Option<u64>,
    #[arg(long)]
    pub conv_tol: Option<f64>,
    #[arg(long)]
    pub div_threshold: Option<f64>,
    #[arg(long)]
    pub record_every: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Orbit file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Half-width of the nonhyperbolic band around |lambda| = 1.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// lo,hi,steps
    #[arg(long)]
    pub alpha_range: Option<String>,
    #[arg(long)]
    pub beta_range: Option<String>,
    #[arg(long)]
    pub mu_range: Option<String>,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Raster file (default: sweep.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub start: StartArgs,
    /// Largest period scanned for periodic points of T.
    #[arg(long)]
    pub p_max: Option<u32>,
    /// Grid size on [0, 1] for the T scans.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Orbit length for the monotonicity monitors.
    #[arg(long)]
    pub steps: Option<u64>,
    /// Number of random parameter draws to certify as well.
    #[arg(long)]
    pub trials: Option<usize>,
    /// RNG seed (overrides MOSQDYN_SEED).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip the grid scans for extra fixed and 2-periodic points.
    #[arg(long)]
    pub fast: bool,
    /// JSON report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub start: StartArgs,
    #[command(flatten)]
    pub orbit: OrbitArgs,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// RK4 step.
    #[arg(long)]
    pub step: Option<f64>,
    /// Side-by-side CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a),
        Command::Classify(a) => commands::classify(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Certify(a) => commands::certify(a),
        Command::Compare(a) => commands::compare(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
