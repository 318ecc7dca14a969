//! Dataset loading, batch evaluation, calibration, metrics, agreement and
//! timing analysis, and report rendering.

pub mod agreement;
pub mod baseline_eval;
pub mod calibrate;
pub mod dataset;
pub mod error;
pub mod evaluate;
pub mod metrics;
pub mod report;
pub mod runner;
pub mod split;
pub mod timing;

pub use agreement::{agreement_analysis, AgreementReport, ModelAgreement, ModelPredictions, Region, MAX_AGREEMENT_MODELS};
pub use baseline_eval::{evaluate_baselines, BaselineEvalConfig, BaselineOutcome, BaselineSummary};
pub use calibrate::{choose_threshold, fit_conv_config, ThresholdEntry};
pub use dataset::{load_eval, load_liar, parse_eval, parse_liar, write_eval_csv, Dataset, SourceFormat, MAX_MALFORMED_FRACTION};
pub use error::EvalError;
pub use evaluate::{calibrate_dataset, calibrate_runs, default_threshold, evaluate, predict, EvalConfig, EvalOutcome};
pub use metrics::{compute_metrics, model_name, pipeline_display, scorer_display, Confusion, MetricsReport, Rates};
pub use report::{emit_report, metrics_csv, parse_metrics_csv, EvalReport, ReportFormat, SplitSummary, POSITIVE_CLASS, REPORT_SCHEMA_VERSION};
pub use runner::{BatchRunner, ClaimRun, ScoredRun, DEFAULT_BATCH_WORKERS};
pub use split::{check_leakage, stratified_split, Split, DEFAULT_CALIBRATION_FRACTION, DEFAULT_SPLIT_SEED, DEFAULT_TRAIN_FRACTION};
pub use timing::{box_stats, quantile_type7, samples_csv, timing_stats, BoxStats, PipelineTimingRow, StageStats, TimedStage, TimingReport, TimingSample};

pub type RatesF64 = Rates<f64>;
pub type RatesF32 = Rates<f32>;
pub type BoxStatsF64 = BoxStats<f64>;
pub type BoxStatsF32 = BoxStats<f32>;
