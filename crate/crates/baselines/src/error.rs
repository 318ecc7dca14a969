use thiserror::Error;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("cannot fit TF-IDF: every document in the corpus is empty")]
    EmptyCorpus,
    #[error("{vectors} vectors but {labels} labels")]
    LengthMismatch { vectors: usize, labels: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("feature index {index} is outside the model dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("sparse indices must be strictly increasing (saw {prev} then {next})")]
    UnorderedIndices { prev: usize, next: usize },
    #[error("non-finite weight at index {0}")]
    NonFinite(usize),
    #[error("invalid training parameter: {0}")]
    InvalidConfig(String),
    #[error("training diverged at epoch {epoch} (loss {loss}); try a smaller learning rate")]
    Diverged { epoch: usize, loss: f64 },
    #[error("unsupported model format version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
    #[error("model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("model file: {0}")]
    Format(#[from] serde_json::Error),
}
