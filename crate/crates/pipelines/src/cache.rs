use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use veritas_core::EvidenceBundle;
use veritas_retrieval::{normalize_query, RetrievalError, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    query: String,
    strategy: Strategy,
    k: usize,
    source: String,
}

type Slot = Arc<OnceLock<Result<EvidenceBundle, RetrievalError>>>;

/// Memoizes retrieval results, including NoEvidence; retryable failures
/// are dropped so the next call fetches again. Concurrent requests
/// for the same key wait for a single fetch.
#[derive(Debug, Default)]
pub struct EvidenceCache {
    slots: Mutex<HashMap<CacheKey, Slot>>,
}

impl EvidenceCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_fetch(
        &self,
        query: &str,
        strategy: Strategy,
        k: usize,
        source: &str,
        fetch: impl FnOnce() -> Result<EvidenceBundle, RetrievalError>,
    ) -> Result<EvidenceBundle, RetrievalError> {
        let key = CacheKey { query: normalize_query(query), strategy, k, source: source.to_string() };
        let slot = self.slots.lock().unwrap().entry(key.clone()).or_default().clone();
        let result = slot.get_or_init(fetch).clone();
        if matches!(&result, Err(e) if e.is_retryable()) {
            let mut slots = self.slots.lock().unwrap();
            if slots.get(&key).is_some_and(|s| Arc::ptr_eq(s, &slot)) {
                slots.remove(&key);
            }
        }
        result
    }

    pub fn len(&self) -> usize {
        self.slots.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
