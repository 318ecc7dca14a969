use thiserror::Error;
use veritas_eval::EvalError;
use veritas_pipelines::PipelineError;

pub const EXIT_VERDICT: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NO_EVIDENCE: u8 = 2;
pub const EXIT_INFRASTRUCTURE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NoEvidence(String),
    #[error("{0}")]
    Infrastructure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::NoEvidence(_) => EXIT_NO_EVIDENCE,
            CliError::Infrastructure(_) => EXIT_INFRASTRUCTURE,
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }
}

const BACKEND_HINT: &str =
    "is the inference sidecar running? pass --backend-url, set VERITAS_BACKEND_URL, or use --backend-url mock";

fn is_infrastructure(e: &PipelineError) -> bool {
    matches!(e, PipelineError::Retrieval(_) | PipelineError::Scoring(_) | PipelineError::Slm(_))
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match &e {
            _ if e.is_no_evidence() => CliError::NoEvidence(e.to_string()),
            PipelineError::Scoring(_) | PipelineError::Slm(_) => CliError::Infrastructure(format!("{e} ({BACKEND_HINT})")),
            _ if is_infrastructure(&e) => CliError::Infrastructure(e.to_string()),
            PipelineError::EmptyHeadline | PipelineError::MissingSlm(_) => CliError::Usage(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Pipeline { claim_id, source } => match CliError::from(source) {
                CliError::Infrastructure(m) => CliError::Infrastructure(format!("{claim_id}: {m}")),
                CliError::Usage(m) => CliError::Usage(format!("{claim_id}: {m}")),
                other => CliError::Input(format!("{claim_id}: {other}")),
            },
            EvalError::UnknownFormat(_) => CliError::Usage(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
