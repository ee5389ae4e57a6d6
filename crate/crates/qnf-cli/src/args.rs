use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "qnf", version, about = "Exact constructions and certificates for quantized ReLU networks")]
pub struct Cli {
    /// Output directory; created if missing.
    #[arg(long, global = true, default_value = "qnf-out")]
    pub out: PathBuf,
    /// Seed for probe sampling and random networks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the three approximation stages for a 1-Lipschitz function and certify them.
    Approx(ApproxArgs),
    /// Depth-precision or depth-magnitude transforms with an equivalence certificate.
    #[command(subcommand)]
    Tradeoff(TradeoffCommand),
    /// Round weights toward zero onto Q_b^a, optionally certifying the error bound and output lattice.
    Quantize(QuantizeArgs),
    /// Build the bit extractor F_{N,L} and check it against Σ θ_i.
    Extract(ExtractArgs),
    /// Tabulate lower bounds and the three-regime upper bounds for b = 1..bmax.
    Regimes(RegimesArgs),
    /// Evaluate a network exactly at the given points.
    Eval(EvalArgs),
    /// Write a seeded random network with weights in 2^-bits Z ∩ [-1, 1].
    RandomNet(RandomNetArgs),
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Samples g(i/G), i = 0..G-1, as {"values": ["p/q", ...]}.
    #[arg(long, conflicts_with = "function", required_unless_present = "function")]
    pub samples: Option<PathBuf>,
    /// Built-in test function: zero, identity, vee or sawtooth.
    #[arg(long)]
    pub function: Option<String>,
    /// Dense tabulation {"denominator": N, "values": [...]} of g on i/N, i = 0..N.
    #[arg(long, conflicts_with = "function")]
    pub reference: Option<PathBuf>,
    #[arg(long, required_unless_present = "budget")]
    pub m: Option<usize>,
    #[arg(long, required_unless_present = "budget")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "budget")]
    pub l: Option<usize>,
    /// Derive (m, n, ℓ) from a width and depth budget W L ≥ 2000.
    #[arg(long, num_args = 2, value_names = ["W", "L"], conflicts_with_all = ["m", "n", "l"])]
    pub budget: Option<Vec<u64>>,
}

#[derive(Debug, Subcommand)]
pub enum TradeoffCommand {
    /// Q_{kb}^{ka} weights to Q_b^a at depth (k+2)L and width 16W.
    Precision(PrecisionArgs),
    /// Magnitude B to B' by adding L' layers.
    Magnitude(MagnitudeArgs),
}

#[derive(Debug, Args)]
pub struct PrecisionArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long)]
    pub a: u32,
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Args)]
pub struct MagnitudeArgs {
    #[arg(long)]
    pub net: PathBuf,
    /// Extra depth L'.
    #[arg(long)]
    pub extra: usize,
    /// Current magnitude bound B.
    #[arg(long)]
    pub bound: String,
    /// Target magnitude B'.
    #[arg(long)]
    pub target: String,
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    #[arg(long)]
    pub net: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long)]
    pub b: u32,
    /// Check the distance bound and the output lattice on probes.
    #[arg(long)]
    pub certify: bool,
    /// Probe lattice 2^-c Z ∩ [0, 1]^d.
    #[arg(long, default_value_t = 4)]
    pub c: u32,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "L")]
    pub l: usize,
    /// Every θ ∈ {0,1}^s, s ≤ NL, and every k ∈ 0..=s.
    #[arg(long, conflicts_with_all = ["theta", "k"])]
    pub exhaustive: bool,
    #[arg(long, required_unless_present = "exhaustive", requires = "k")]
    pub theta: Option<String>,
    #[arg(long)]
    pub k: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RegimesArgs {
    #[arg(long = "W")]
    pub w: u64,
    #[arg(long = "L")]
    pub l: u64,
    #[arg(long)]
    pub bmax: u64,
    /// Constants as JSON; missing fields take the illustrative defaults.
    #[arg(long)]
    pub constants: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub net: PathBuf,
    /// One input vector per flag, comma separated, e.g. --x 1/2,1/3.
    #[arg(long = "x", required = true)]
    pub points: Vec<String>,
}

#[derive(Debug, Args)]
pub struct RandomNetArgs {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 4)]
    pub width: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 8)]
    pub bits: u32,
}
