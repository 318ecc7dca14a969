use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use veritas_core::{PipelineKind, ScorerKind};
use veritas_pipelines::SlmKind;

#[derive(Debug, Parser)]
#[command(name = "veritas", version, about = "Check news headlines against web evidence")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. Flags win over environment
/// variables, which win over the config file.
#[derive(Debug, Clone, Args, Default)]
pub struct GlobalArgs {
    /// Inference sidecar base URL, or `mock` for the built-in lexical backends
    #[arg(long, global = true, env = "VERITAS_BACKEND_URL")]
    pub backend_url: Option<String>,
    /// User agent sent to search and news sites
    #[arg(long, global = true, env = "VERITAS_USER_AGENT")]
    pub user_agent: Option<String>,
    /// Replay recorded pages from DIR instead of the live web
    #[arg(long, global = true, value_name = "DIR")]
    pub fixtures: Option<PathBuf>,
    /// Search endpoint for live retrieval
    #[arg(long, global = true, env = "VERITAS_SEARCH_URL")]
    pub search_url: Option<String>,
    /// Number of articles to read
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// TOML file with defaults for any of these options
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Machine-readable output
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify a single headline
    Verify(VerifyArgs),
    /// Calibrate and evaluate pipelines on a labelled dataset
    Eval(EvalArgs),
    /// Pair each credible headline with a generated fake one
    GenerateEvalset(GenerateArgs),
    /// Pick decision thresholds on the calibration split
    Calibrate(EvalArgs),
    /// Train and evaluate the TF-IDF baselines
    Baselines(BaselineArgs),
    /// Time retrieval and scoring per pipeline
    Bench(EvalArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub headline: String,
    #[arg(long)]
    pub pipeline: Option<PipelineKind>,
    #[arg(long)]
    pub scorer: Option<ScorerKind>,
    /// Threshold file written by `calibrate --report`
    #[arg(long, value_name = "PATH")]
    pub thresholds: Option<PathBuf>,
    /// Convolution filter weights (JSON)
    #[arg(long, value_name = "PATH")]
    pub conv_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Evaluation CSV with headline, label, source and domain columns
    pub dataset: PathBuf,
    /// Pipelines to run; repeat for several (default: all)
    #[arg(long)]
    pub pipeline: Vec<PipelineKind>,
    /// Scorers to run; repeat for several (default: all)
    #[arg(long)]
    pub scorer: Vec<ScorerKind>,
    /// Fraction of the dataset used for calibration
    #[arg(long)]
    pub calib_frac: Option<f64>,
    /// Write the report to PATH; the extension picks json, csv or md
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// Fit the convolution filter on the calibration split
    #[arg(long)]
    pub fit_conv: bool,
    #[arg(long, value_name = "PATH")]
    pub conv_config: Option<PathBuf>,
    /// Parallel claims
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// CSV of credible headlines with a `headline` column
    pub truths: PathBuf,
    /// Output evaluation CSV
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, default_value = "mistral")]
    pub slm: SlmKind,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    /// LIAR training TSV
    #[arg(long)]
    pub train: PathBuf,
    /// LIAR test TSV; without it the training file is split 70:30
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Additional evaluation CSVs to report on
    #[arg(long)]
    pub eval: Vec<PathBuf>,
    /// Directory for the trained model files
    #[arg(long, value_name = "DIR")]
    pub save_dir: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}
