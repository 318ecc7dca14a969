use thiserror::Error;

/// Failure talking to a scoring or generation backend.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackendError {
    /// Transport failure, timeout, or a 5xx/503 answer; worth retrying.
    #[error("backend unavailable: {0}")]
    Unavailable(String),
    /// The backend rejected the request (4xx).
    #[error("backend rejected request: {0}")]
    Rejected(String),
    #[error("malformed backend response: {0}")]
    Malformed(String),
}

impl BackendError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, BackendError::Unavailable(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoringError {
    #[error("{0} text is empty")]
    EmptyText(&'static str),
    #[error("scoring backend failed: {0}")]
    Backend(#[from] BackendError),
    #[error("backend contract violated: {0}")]
    ContractViolation(String),
    #[error("invalid pair matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid convolution config: {0}")]
    InvalidConfig(String),
}

impl ScoringError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, ScoringError::Backend(e) if e.is_retryable())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("scores and labels differ in length ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("calibration needs at least two examples, got {0}")]
    TooFew(usize),
    #[error("calibration labels contain a single class")]
    SingleClass,
    #[error("score {0} lies outside [-1, 1]")]
    ScoreOutOfRange(f64),
    #[error("grid step must be positive and at most 2, got {0}")]
    BadGridStep(f64),
}
