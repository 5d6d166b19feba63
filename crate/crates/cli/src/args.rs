use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use interdep_core::simulator::DependencyKind;

#[derive(Debug, Parser)]
#[command(
    name = "interdep",
    version,
    about = "Detect multi-variable dependencies in categorical data"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Logarithm base for entropies.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub log_base: f64,

    /// Multiply symmetrized deltas of n >= 3 variables by (-1)^n.
    #[arg(long, global = true)]
    pub alternating_sign: bool,

    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output directory for written files.
    #[arg(long, global = true, env = "INTERDEP_OUT", default_value = ".")]
    pub out: PathBuf,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a simulated six-variable dataset.
    Simulate(SimulateArgs),
    /// Interaction information and deltas for every subset.
    Measures(MeasuresArgs),
    /// Infer a weighted dependency hypergraph.
    Infer(InferArgs),
    /// Pairwise and generalized set complexity.
    Complexity(ComplexityArgs),
    /// Run a sample-size or noise experiment on simulated data.
    Experiment(ExperimentArgs),
    /// Pearson and Spearman correlation for every pair.
    Baseline(BaselineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Kind {
    Independent,
    WOfX,
    WOfXy,
    WOfXyz,
}

impl From<Kind> for DependencyKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Independent => DependencyKind::Independent,
            Kind::WOfX => DependencyKind::WOfX,
            Kind::WOfXy => DependencyKind::WOfXy,
            Kind::WOfXyz => DependencyKind::WOfXyz,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,

    /// Number of samples.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,

    /// CSV path; defaults to `<out>/<kind>_n<N>_seed<S>.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DelimiterArg {
    Csv,
    Tsv,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV or TSV of category codes, one row per sample.
    pub input: PathBuf,

    /// The first row holds data, not names.
    #[arg(long)]
    pub no_header: bool,

    /// Field separator; guessed from the extension when absent.
    #[arg(long, value_enum)]
    pub delimiter: Option<DelimiterArg>,

    /// Map text labels to codes instead of requiring integers.
    #[arg(long)]
    pub labels: bool,

    /// Declared cardinalities, comma separated, one per column.
    #[arg(long, value_delimiter = ',')]
    pub cardinality: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StreamFormat {
    Tsv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Largest subset size.
    #[arg(long, default_value_t = 3)]
    pub sigma: usize,

    /// Report the delta with this variable (name or index) as target, for
    /// every subset containing it.
    #[arg(long)]
    pub target: Option<String>,

    #[arg(long, value_enum, default_value_t = StreamFormat::Tsv)]
    pub format: StreamFormat,

    /// Write here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Delta,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NullArg {
    Max,
    Pooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dot,
    Both,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, default_value_t = 3)]
    pub sigma: usize,

    /// Permutations for the null distribution.
    #[arg(long, default_value_t = 1000)]
    pub n_perm: usize,

    /// Null quantile used as the per-size threshold.
    #[arg(long, default_value_t = 0.99)]
    pub quantile: f64,

    /// Fixed threshold on |delta|; skips the permutation null.
    #[arg(long)]
    pub threshold: Option<f64>,

    /// How permuted values are summarized per subset size.
    #[arg(long, value_enum, default_value_t = NullArg::Max)]
    pub null_statistic: NullArg,

    /// Edge weight.
    #[arg(long, value_enum, default_value_t = MeasureArg::Delta)]
    pub measure: MeasureArg,

    /// Drop edges that contain another edge.
    #[arg(long)]
    pub minimal: bool,

    /// Only consider subsets containing this variable (name or index).
    #[arg(long)]
    pub target: Option<String>,

    #[arg(long, value_enum, default_value_t = GraphFormat::Both)]
    pub format: GraphFormat,

    /// File stem inside the output directory; defaults to the input stem.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, default_value_t = 2)]
    pub sigma: usize,

    /// Largest components to list.
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,

    #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
    pub format: TableFormat,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
    pub format: TableFormat,

    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Tracked subset, by variable name.
    #[arg(long, value_delimiter = ',', default_value = "X,Y,W", global = true)]
    pub focus: Vec<String>,

    #[command(subcommand)]
    pub kind: ExperimentKind,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentKind {
    /// Disjoint blocks of a large W(X, Y) set.
    Partition {
        #[arg(long, default_value_t = 5000)]
        n: usize,
        /// Block sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "100,200,500,1000")]
        sizes: Vec<usize>,
    },
    /// Growing prefixes of a large W(X, Y) set.
    Incremental {
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        step: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Increasing numbers of flipped cells in a W(X, Y) set.
    Noise {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        levels: usize,
        #[arg(long, default_value_t = 10)]
        replicates: usize,
        /// Flips added per level.
        #[arg(long, default_value_t = 25)]
        step: usize,
        /// Variables to flip, by name.
        #[arg(long, value_delimiter = ',', default_value = "W")]
        noise_target: Vec<String>,
    },
}
