use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "polarnorm",
    version,
    about = "Min vs. full free-group norms on the generator span"
)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Tolerance for the mathematical self-checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Output file (a directory for batch verification). Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Suppress summaries on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Random span element.
    Gen(GenArgs),
    /// Polarization decomposition of a triplet into elementary blocks.
    Decompose(DecomposeArgs),
    /// Full and min estimates plus the certified chain, for one file or a directory.
    Verify(VerifyArgs),
    /// Explicit elementary triplet and its associated matrix.
    Elementary(ElementaryArgs),
    /// Lower bound on the squared norm in one mode.
    Estimate(EstimateArgs),
}

#[derive(Args, Debug)]
pub struct Limits {
    /// Largest accepted n.
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    /// Largest accepted k.
    #[arg(long, default_value_t = 8)]
    pub max_k: usize,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Probability that a coefficient is nonzero.
    #[arg(long, default_value_t = 1.0)]
    pub density: f64,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// Triplet JSON.
    pub input: PathBuf,
    /// Keep zero-weight blocks.
    #[arg(long)]
    pub no_prune: bool,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Witness dimension for the full search.
    #[arg(long, default_value_t = 4)]
    pub dims: usize,
    /// Per-factor dimension for the min search.
    #[arg(long, default_value_t = 3)]
    pub min_dims: usize,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Instance JSON, or a directory of them.
    pub input: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Args, Debug)]
pub struct ElementaryArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, num_args = 2, value_names = ["I0", "J0"])]
    pub pair: Vec<usize>,
    /// Power s of ε = i^s.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..4))]
    pub eps: u8,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Full,
    Min,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    /// Instance JSON.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Full)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub limits: Limits,
}
