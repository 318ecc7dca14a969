use serde::{Deserialize, Serialize};
use veritas_core::Scalar;

use crate::{BackendError, NliDistribution};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SentencePair {
    pub premise: String,
    pub hypothesis: String,
}

impl SentencePair {
    pub fn new(premise: impl Into<String>, hypothesis: impl Into<String>) -> Self {
        SentencePair {
            premise: premise.into(),
            hypothesis: hypothesis.into(),
        }
    }
}

/// Three-way NLI classifier over sentence pairs.
///
/// Implementations must return one distribution per input pair, in input
/// order. Batching and chunking are the implementation's concern.
pub trait NliBackend<T: Scalar>: Send + Sync {
    fn classify(&self, pairs: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError>;
}

/// Document-level classifier returning the probability that `claim` is
/// consistent with `document`.
pub trait ConsistencyBackend<T: Scalar>: Send + Sync {
    fn consistency(&self, document: &str, claim: &str) -> Result<T, BackendError>;
}

impl<T: Scalar, B: NliBackend<T> + ?Sized> NliBackend<T> for &B {
    fn classify(&self, pairs: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError> {
        (**self).classify(pairs)
    }
}

impl<T: Scalar, B: ConsistencyBackend<T> + ?Sized> ConsistencyBackend<T> for &B {
    fn consistency(&self, document: &str, claim: &str) -> Result<T, BackendError> {
        (**self).consistency(document, claim)
    }
}

impl<T: Scalar, B: NliBackend<T> + ?Sized> NliBackend<T> for std::sync::Arc<B> {
    fn classify(&self, pairs: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError> {
        (**self).classify(pairs)
    }
}

impl<T: Scalar, B: ConsistencyBackend<T> + ?Sized> ConsistencyBackend<T> for std::sync::Arc<B> {
    fn consistency(&self, document: &str, claim: &str) -> Result<T, BackendError> {
        (**self).consistency(document, claim)
    }
}
