use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("unrecognized truthfulness label {raw:?}{}", row.map(|r| format!(" (row {r})")).unwrap_or_default())]
    UnknownLabel { raw: String, row: Option<usize> },

    #[error("unrecognized binary label {0:?}")]
    UnknownBinaryLabel(String),

    #[error("{what} must not be empty")]
    Empty { what: &'static str },

    #[error("label {label} does not match mapped six-way label {raw}")]
    LabelMismatch { label: String, raw: String },

    #[error("{scorer} score {score} outside [{lo}, {hi}]")]
    ScoreOutOfRange {
        scorer: &'static str,
        score: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{what} must be finite and non-negative, got {value}")]
    NegativeDuration { what: &'static str, value: f64 },

    #[error("quick-answer evidence must carry exactly one passage, got {0}")]
    QuickAnswerPassages(usize),
}
