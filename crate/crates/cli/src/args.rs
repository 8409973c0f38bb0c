use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "maxent", version, about = "Fit, sample and evaluate maximum-entropy random graph models")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "MAXENT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to an edge list and write it as JSON.
    Fit(FitArgs),
    /// Edge probabilities for node pairs under a saved model.
    Predict(PredictArgs),
    /// Draw random graphs from a saved model.
    Sample(SampleArgs),
    /// Link-prediction AUC of heuristics and MaxEnt variants.
    Linkpred(LinkpredArgs),
    /// Goodness-of-fit bands for a fitted model and the Chung-Lu baseline.
    Gof(GofArgs),
    /// Timing runs on Erdos-Renyi graphs.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeatureArg {
    Cn,
    Aa,
    Rai,
    Pa,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerArg {
    Lbfgs,
    Newton,
    Diag,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Global feature constraint; repeat for several.
    #[arg(long = "feature", value_enum)]
    pub features: Vec<FeatureArg>,
    /// Polynomial coefficients q1,q2,... for `--feature poly`.
    #[arg(long, value_delimiter = ',')]
    pub coeffs: Vec<f64>,
    /// Rank of the low-rank approximation.
    #[arg(long, default_value_t = 128)]
    pub d: usize,
    /// Number of bins per feature.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    /// Use exact dense features instead of block approximations.
    #[arg(long)]
    pub exact: bool,
    /// Drop the per-node degree constraints.
    #[arg(long)]
    pub no_degrees: bool,
    #[arg(long, value_enum, default_value_t = OptimizerArg::Lbfgs)]
    pub optimizer: OptimizerArg,
    #[arg(long, default_value_t = 1e-3)]
    pub grad_tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// Residual tolerance of the eigensolver.
    #[arg(long, default_value_t = 1e-8)]
    pub eig_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Node pairs, one `src dst` per line.
    #[arg(long)]
    pub pairs: PathBuf,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Number of graphs.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving `sample_<i>.edges`.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Cn,
    Jc,
    Aa,
    Pa,
    Rai,
    Oracle,
    Random,
}

#[derive(Debug, Args)]
pub struct LinkpredArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Results CSV; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0.5)]
    pub test_fraction: f64,
    /// Further hold out this fraction of the training edges (unused for tuning).
    #[arg(long)]
    pub validation_fraction: Option<f64>,
    /// Baseline scorers.
    #[arg(long = "method", value_enum, default_values_t = [MethodArg::Cn, MethodArg::Jc, MethodArg::Aa, MethodArg::Pa, MethodArg::Rai])]
    pub methods: Vec<MethodArg>,
    /// MaxEnt variants: `full` (exact CN, RAI, PA) or `k=<bins>` (blocked
    /// CN and RAI, degree-binned PA).
    #[arg(long = "variant", default_values_t = ["k=5".to_string(), "k=100".to_string()])]
    pub variants: Vec<String>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Directory receiving `maxent_gof.csv` and `chunglu_gof.csv`.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Node counts of the Erdos-Renyi graphs.
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 5000, 25000, 125000, 625000])]
    pub sizes: Vec<usize>,
    /// Average edges per node.
    #[arg(long, default_value_t = 10.0)]
    pub edges_per_node: f64,
    #[arg(long, default_value_t = 20)]
    pub d: usize,
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    /// Optimizers to compare on each size.
    #[arg(long = "optimizer", value_enum, default_values_t = [OptimizerArg::Lbfgs, OptimizerArg::Newton, OptimizerArg::Diag])]
    pub optimizers: Vec<OptimizerArg>,
    /// Also count groups for k = 200, 400, ..., 2000 at `--sweep-n` nodes.
    #[arg(long)]
    pub sweep: bool,
    #[arg(long, default_value_t = 100_000)]
    pub sweep_n: usize,
    /// Sizes whose estimated memory exceeds this are skipped.
    #[arg(long, default_value_t = 4.0)]
    pub mem_limit_gb: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub grad_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory receiving the CSV files.
    #[arg(long)]
    pub output: PathBuf,
}
