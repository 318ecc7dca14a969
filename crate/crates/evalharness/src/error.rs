use std::path::PathBuf;

use thiserror::Error;
use veritas_baselines::BaselineError;
use veritas_core::CoreError;
use veritas_nli::{CalibrationError, ScoringError};
use veritas_pipelines::PipelineError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{name}: {message}")]
    Format { name: String, message: String },
    #[error("{name}: missing columns {missing:?}")]
    MissingColumns { name: String, missing: Vec<String> },
    #[error("{name}: {malformed} of {total} rows malformed, first: {}", first.join("; "))]
    TooManyMalformed { name: String, malformed: usize, total: usize, first: Vec<String> },
    #[error("{name}: row {row}: {message}")]
    Row { name: String, row: usize, message: String },
    #[error("{name}: duplicate id {id:?} at row {row}")]
    DuplicateId { name: String, id: String, row: usize },
    #[error("{0} is empty")]
    Empty(String),
    #[error("{what}: {left} vs {right} entries")]
    LengthMismatch { what: &'static str, left: usize, right: usize },
    #[error("model {model:?} does not cover the same ids as the labels")]
    IdMismatch { model: String },
    #[error("agreement analysis needs 2 to 4 models, got {0}")]
    ModelCount(usize),
    #[error("unknown report format {0:?} (expected json, csv or markdown)")]
    UnknownFormat(String),
    #[error("invalid split: {0}")]
    Split(String),
    #[error("calibration split leaks into the reporting split: {0:?}")]
    Leakage(Vec<String>),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error("{claim_id}: {source}")]
    Pipeline { claim_id: String, source: PipelineError },
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl EvalError {
    pub(crate) fn format(name: &str, message: impl ToString) -> Self {
        EvalError::Format { name: name.to_string(), message: message.to_string() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        EvalError::Io { path: path.into(), source }
    }
}
