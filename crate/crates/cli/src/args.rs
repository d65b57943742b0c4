use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "macroent", version, about = "Thermodynamic entanglement witnesses for spin chains and Bose gases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Witness margins over a (T, B) grid
    Sweep(SweepArgs),
    /// Both witnesses at a single (T, B) point
    Witness(WitnessArgs),
    /// Separability and condensation temperatures of a box gas
    Bose(BoseArgs),
    /// Two-point correlations and their decay class
    Corr(CorrArgs),
    /// Maximize |<H_ex>| over product states and compare with the separable bound
    Certify(CertifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Xxx,
    Xx,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryKind {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// hbar = k_B = mu_B = 1
    Natural,
    /// Energies and fields in meV, temperatures in K
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    Zz,
    FullDot,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    #[arg(long, value_enum, default_value = "xxx")]
    pub model: ModelKind,
    #[arg(long, default_value_t = 8)]
    pub sites: usize,
    /// Coupling of the xxx and xx models
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    /// Strong bond of the alternating model
    #[arg(long, allow_negative_numbers = true)]
    pub j1: Option<f64>,
    /// Weak bond of the alternating model
    #[arg(long, allow_negative_numbers = true)]
    pub j2: Option<f64>,
    #[arg(long, value_enum, default_value = "open")]
    pub boundary: BoundaryKind,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "natural")]
    pub units: Units,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Temperature axis as lo:hi:n
    #[arg(long, allow_hyphen_values = true)]
    pub t_axis: String,
    /// Field axis as lo:hi:n
    #[arg(long, default_value = "0:0:1", allow_hyphen_values = true)]
    pub b_axis: String,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long)]
    pub temp: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub field: f64,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BoseArgs {
    #[arg(long, default_value_t = 3)]
    pub dim: u32,
    #[arg(long, default_value_t = 1000)]
    pub particles: u64,
    #[arg(long, default_value_t = 1)]
    pub regions: u64,
    /// Box volume (length in d = 1, area in d = 2)
    #[arg(long, default_value_t = 1000.0)]
    pub volume: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    /// Smallest momentum cutoff of the condensate-fraction probe
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CorrArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long)]
    pub temp: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub field: f64,
    #[arg(long, value_enum, default_value = "zz")]
    pub op: OpKind,
    /// Subtract <s_i><s_j> (zz only)
    #[arg(long)]
    pub connected: bool,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value_t = 1000)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Claimed bound on |<H_ex>|; N|J| when absent
    #[arg(long)]
    pub bound: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `lo:hi:n` into `n` evenly spaced points.
pub fn parse_axis(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("axis `{text}` is not of the form lo:hi:n"));
    };
    let lo: f64 = lo.trim().parse().map_err(|_| format!("axis `{text}`: bad lower end"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("axis `{text}`: bad upper end"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("axis `{text}`: bad point count"))?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(format!("axis `{text}` has non-finite ends"));
    }
    match n {
        0 => Err(format!("axis `{text}` has no points")),
        1 if lo == hi => Ok(vec![lo]),
        1 => Err(format!("axis `{text}`: a single point needs lo == hi")),
        _ if hi <= lo => Err(format!("axis `{text}` must have hi > lo")),
        _ => Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()),
    }
}
