use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "rulepick", version, about = "Pick rank-aggregation rules by split consistency")]
pub struct Cli {
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pick the most consistent rule for a profile.
    Pick(PickArgs),
    /// Per-rule disagreement as CSV.
    Eval(EvalArgs),
    /// Search positional scoring vectors by simulated annealing.
    Anneal(AnnealArgs),
    /// Axiom violation rates over synthetic profiles.
    Axioms(AxiomsArgs),
    /// Decide, verify or reduce perfect-consistency instances.
    Perfpos(PerfposArgs),
    /// Sample a synthetic profile.
    Generate(GenerateArgs),
    /// Pick a score aggregator for review data.
    Scores(ScoresArgs),
    /// Convert a dataset to profile JSON.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputFormat {
    /// By file extension; JSON otherwise.
    Auto,
    Json,
    Soc,
    Soi,
    Toc,
    /// `event, rank, country` rows.
    Medals,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProfileInput {
    /// Profile file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: InputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightingArg {
    Auto,
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleArg {
    Normalized,
    Raw,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SplitArgs {
    /// Random splits per estimate.
    #[arg(long, default_value_t = 10)]
    pub splits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exact expectation over all splits instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value = "auto")]
    pub weighting: WeightingArg,
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "normalized")]
    pub scale: ScaleArg,
    /// Leave out splits with an empty side.
    #[arg(long)]
    pub skip_empty_splits: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PickArgs {
    #[command(flatten)]
    pub input: ProfileInput,
    /// Comma-separated candidate rules.
    #[arg(long, value_delimiter = ',', default_value = "plurality,plurality_veto,veto,two_approval,borda")]
    pub rules: Vec<String>,
    #[command(flatten)]
    pub splits: SplitArgs,
    #[arg(long, default_value_t = 0.0)]
    pub tie_epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricArg {
    Kt,
    Jaccard,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: ProfileInput,
    #[arg(long, value_delimiter = ',', default_value = "plurality,plurality_veto,veto,two_approval,borda")]
    pub rules: Vec<String>,
    #[command(flatten)]
    pub splits: SplitArgs,
    #[arg(long, value_enum, default_value = "kt")]
    pub metric: MetricArg,
    /// Top-k size for the Jaccard metric.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnnealArgs {
    #[command(flatten)]
    pub input: ProfileInput,
    #[arg(long, default_value_t = 500)]
    pub steps: usize,
    /// Comma-separated start vectors as rule names; one chain each.
    #[arg(long, value_delimiter = ',', default_value = "plurality,veto,borda,two_approval,plurality_veto")]
    pub starts: Vec<String>,
    #[arg(long, default_value_t = 10)]
    pub splits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "auto")]
    pub weighting: WeightingArg,
    /// Write the per-step trace CSV here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum AxiomArg {
    ReversalSymmetry,
    UnionConsistency,
    Monotonicity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum DistArg {
    Mallows,
    Pl,
    Ic,
    Urn,
    SinglePeaked,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AxiomsArgs {
    #[arg(long, value_enum, value_delimiter = ',', default_value = "reversal_symmetry,union_consistency,monotonicity")]
    pub axiom: Vec<AxiomArg>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "mallows,pl")]
    pub source: Vec<DistArg>,
    /// Comma-separated alternative counts.
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub profiles: usize,
    #[arg(long, default_value_t = 50)]
    pub splits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "plurality,plurality_veto,veto,two_approval,borda")]
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerfposMode {
    Decide,
    Verify,
    Reduce,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PerfposArgs {
    /// Instance JSON, or `-` for stdin.
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value = "decide")]
    pub mode: PerfposMode,
    /// Comma-separated scoring vector for `verify`.
    #[arg(long, value_delimiter = ',')]
    pub witness: Option<Vec<f64>>,
    /// Largest number of alternatives to enumerate orders over.
    #[arg(long, default_value_t = 8)]
    pub limit: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub dist: DistArg,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Mallows dispersion.
    #[arg(long, default_value_t = 0.4)]
    pub phi: f64,
    /// Urn replication; drawn from Gamma(0.8, 1) when absent.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, requires = "coverage")]
    pub ballot_length: Option<usize>,
    #[arg(long, requires = "ballot_length")]
    pub coverage: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScoresArgs {
    /// `item, reviewer, score` CSV, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "mean,min,max,median,geometric_mean,trimmed_mean")]
    pub aggregators: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 6)]
    pub min_reviews: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tie_epsilon: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub input: ProfileInput,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
