use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cluster_posterior::subset::DEFAULT_SCALE_BITS;

#[derive(Debug, Parser)]
#[command(
    name = "cluster-posterior",
    version,
    about = "Exact posterior summaries for Bayesian clustering of up to about 20 items"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute p(k | y), the co-occurrence matrix and the best partitions.
    Run(RunArgs),
    /// Write a synthetic dataset.
    Generate(GenerateArgs),
    /// Compare the engine against exhaustive enumeration (n <= 13).
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Beta-binomial model for 0/1 features.
    Binary,
    /// Gamma-normal model for real-valued features.
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorName {
    UniformK,
    UniformPartitions,
    Dp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DpWeightMode {
    /// w_k includes theta^k, so the prior sums to one for every theta.
    WithThetaPower,
    /// w_k = Gamma(theta) / (Gamma(theta + n) k!), without theta^k.
    WithoutThetaPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineName {
    Direct,
    FastExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Output {
    PosteriorK,
    Cooccurrence,
    Modes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentName {
    /// 18 items in 3 clusters of 6, two normal features.
    #[value(name = "normal-18")]
    Normal18,
    /// 20 items in 5 clusters, 30 binary features.
    #[value(name = "binary-20")]
    Binary20,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindName {
    Binary,
    Continuous,
}

/// Input data, model and prior.
#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// CSV file, one row per item and one column per feature.
    #[arg(long)]
    pub data: PathBuf,
    /// The first row of the CSV file is a header.
    #[arg(long)]
    pub header: bool,
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, value_enum, default_value = "uniform-k")]
    pub prior: PriorName,
    /// Dirichlet process concentration.
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, value_enum, default_value = "with-theta-power")]
    pub dp_weight: DpWeightMode,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Prior mean of the cluster means (normal model).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Prior precision scale of the cluster means (normal model).
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value = "direct")]
    pub engine: EngineName,
    /// Fractional bits of the fixed-point images used by fast-exact.
    #[arg(long, default_value_t = DEFAULT_SCALE_BITS)]
    pub scale_bits: u32,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Deliberately corrupt the cluster scores handed to the engine.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "posterior-k,cooccurrence,modes"
    )]
    pub outputs: Vec<Output>,
    /// Output file for JSON (`-` for stdout), or directory for CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Leave wall time out of the report so that reruns are byte-identical.
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub experiment: ExperimentName,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the generating cluster of each item (1-based), one per line.
    #[arg(long)]
    pub labels_out: Option<PathBuf>,
    /// Items (custom experiment).
    #[arg(long)]
    pub n: Option<usize>,
    /// Clusters (custom experiment).
    #[arg(long)]
    pub k: Option<usize>,
    /// Features (custom experiment).
    #[arg(long)]
    pub d: Option<usize>,
    /// Feature kind (custom experiment).
    #[arg(long, value_enum)]
    pub kind: Option<KindName>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Largest accepted absolute difference.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Write the enumeration results as a JSON report.
    #[arg(long)]
    pub oracle_out: Option<PathBuf>,
}
