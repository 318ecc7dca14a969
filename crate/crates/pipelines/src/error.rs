use thiserror::Error;
use veritas_core::{CoreError, PipelineKind};
use veritas_nli::{BackendError, ScoringError};
use veritas_retrieval::RetrievalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("headline is empty")]
    EmptyHeadline,
    #[error("{pipeline} pipeline found no evidence: {source}")]
    NoEvidence { pipeline: PipelineKind, source: RetrievalError },
    #[error("retrieval failed: {0}")]
    Retrieval(RetrievalError),
    #[error("scoring failed: {0}")]
    Scoring(#[from] ScoringError),
    #[error("language model failed: {0}")]
    Slm(#[from] BackendError),
    #[error("generated text contains no question: {raw:?}")]
    QuestionGenFailure { raw: String },
    #[error("generation repeated the input headline {headline:?}")]
    DegenerateGeneration { headline: String },
    #[error("invalid prompt template: {0}")]
    Template(String),
    #[error("no language model configured for {0}")]
    MissingSlm(PipelineKind),
    #[error(transparent)]
    Record(#[from] CoreError),
}

impl PipelineError {
    pub fn is_no_evidence(&self) -> bool {
        matches!(self, PipelineError::NoEvidence { .. })
    }

    pub fn is_retryable(&self) -> bool {
        match self {
            PipelineError::Retrieval(e) => e.is_retryable(),
            PipelineError::Scoring(e) => e.is_retryable(),
            PipelineError::Slm(e) => e.is_retryable(),
            _ => false,
        }
    }
}
