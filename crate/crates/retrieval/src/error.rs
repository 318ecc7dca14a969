use thiserror::Error;
use veritas_core::Stage;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RetrievalError {
    #[error("invalid url {url:?}: {reason}")]
    InvalidUrl { url: String, reason: String },
    #[error("request to {url} failed: {message}")]
    Transport { url: String, message: String, retryable: bool },
    #[error("{url} answered with status {status}")]
    Status { url: String, status: u16 },
    #[error("robots.txt disallows {url}")]
    Disallowed { url: String },
    #[error("no evidence found for {query:?} (tried {})", stage_list(.attempted))]
    NoEvidence { query: String, attempted: Vec<Stage> },
    #[error("fixture store: {0}")]
    Fixture(String),
    #[error("selector config: {0}")]
    Selectors(String),
    #[error("{0}")]
    InvalidArgument(String),
}

fn stage_list(stages: &[Stage]) -> String {
    stages.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
}

impl RetrievalError {
    /// Transport failures and 5xx answers are worth retrying.
    pub fn is_retryable(&self) -> bool {
        match self {
            RetrievalError::Transport { retryable, .. } => *retryable,
            RetrievalError::Status { status, .. } => *status >= 500,
            _ => false,
        }
    }

    pub fn is_no_evidence(&self) -> bool {
        matches!(self, RetrievalError::NoEvidence { .. })
    }
}
