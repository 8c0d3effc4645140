use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::sweep::SweepSpec;

#[derive(Debug, Parser)]
#[command(name = "rfh", version, about = "Cognitive radio network with RF energy harvesting: analysis, simulation, optimization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form transmission and outage probabilities.
    Analyze(AnalyzeArgs),
    /// Monte Carlo estimates with confidence half-widths.
    Simulate(SimulateArgs),
    /// Throughput-optimal ST power and density.
    Optimize(OptimizeArgs),
    /// Regenerate the data behind a reference figure (5 to 13).
    Figure(FigureArgs),
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// JSON document with every network parameter.
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// name=start:stop:n[:log]; repeat for a cartesian product.
    #[arg(long = "sweep")]
    pub sweeps: Vec<SweepSpec>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub inputs: Inputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HarvestArg {
    Nearest,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ActivityArg {
    Thinning,
    Fresh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Transmission probability of a typical ST.
    Pt,
    OutagePrimary,
    OutageSecondary,
    /// Outage of a wireless-powered link (r_g = 0).
    OutageWit,
    /// Empirical CDFs of the aggregate ST interference, exact and approximate.
    InterferenceCdf,
}

#[derive(Debug, Clone, Args)]
pub struct SimFlags {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub replications: usize,
    /// Slots collected per replication after warm-up.
    #[arg(long, default_value_t = 1000)]
    pub slots: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Torus side; default max(20 r_g, 100).
    #[arg(long)]
    pub window: Option<f64>,
    /// Discarded slots; default max(10 M, 100).
    #[arg(long)]
    pub warmup: Option<usize>,
    #[arg(long, value_enum, default_value_t = HarvestArg::Nearest)]
    pub harvest: HarvestArg,
    /// PT activity per slot. Defaults to thinning for `simulate` and fresh
    /// for `figure`.
    #[arg(long, value_enum)]
    pub pt_activity: Option<ActivityArg>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[command(flatten)]
    pub sim: SimFlags,
    #[arg(long, value_enum, default_value_t = Quantity::Pt)]
    pub quantity: Quantity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed form without noise, bisection otherwise; the WIT problem when r_g = 0.
    Auto,
    Closed,
    Numeric,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure number, 5 to 13.
    pub id: u32,
    /// Output directory; one CSV per curve.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub sim: SimFlags,
}
