//! Blocking HTTP client for the inference sidecar.

use std::thread;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::Serialize;
use tracing::warn;
use veritas_core::Scalar;

use crate::wire::{
    ConsistencyRequest, ConsistencyResponse, HealthResponse, NliBatchRequest, NliBatchResponse, CONSISTENCY_PATH,
    HEALTH_PATH, MAX_NLI_BATCH, NLI_BATCH_PATH,
};
use crate::{BackendError, ConsistencyBackend, NliBackend, NliDistribution, SentencePair};

#[derive(Debug, Clone)]
pub struct SidecarClient {
    base_url: String,
    http: reqwest::blocking::Client,
    retries: u32,
    backoff: Duration,
    batch_size: usize,
    parallelism: usize,
}

impl SidecarClient {
    /// Client with a 30 s request timeout, 2 retries and 4 concurrent
    /// batch requests.
    pub fn new(base_url: &str) -> Result<Self, BackendError> {
        Self::with_timeout(base_url, Duration::from_secs(30))
    }

    pub fn with_timeout(base_url: &str, timeout: Duration) -> Result<Self, BackendError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| BackendError::Unavailable(e.to_string()))?;
        Ok(SidecarClient {
            base_url: base_url.trim_end_matches('/').to_string(),
            http,
            retries: 2,
            backoff: Duration::from_millis(200),
            batch_size: MAX_NLI_BATCH,
            parallelism: 4,
        })
    }

    pub fn retries(mut self, retries: u32, backoff: Duration) -> Self {
        self.retries = retries;
        self.backoff = backoff;
        self
    }

    pub fn batch_size(mut self, size: usize) -> Self {
        self.batch_size = size.clamp(1, MAX_NLI_BATCH);
        self
    }

    pub fn parallelism(mut self, workers: usize) -> Self {
        self.parallelism = workers.max(1);
        self
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    pub fn health(&self) -> Result<HealthResponse, BackendError> {
        let url = format!("{}{}", self.base_url, HEALTH_PATH);
        let resp = self
            .http
            .get(&url)
            .send()
            .map_err(|e| BackendError::Unavailable(format!("{url}: {e}")))?;
        decode(&url, resp)
    }

    /// POSTs `body` as JSON, retrying transport failures and 5xx answers
    /// with exponential backoff.
    pub fn post_json<Req: Serialize, Resp: DeserializeOwned>(
        &self,
        path: &str,
        body: &Req,
    ) -> Result<Resp, BackendError> {
        let url = format!("{}{}", self.base_url, path);
        let mut attempt = 0;
        loop {
            let result = self
                .http
                .post(&url)
                .json(body)
                .send()
                .map_err(|e| BackendError::Unavailable(format!("{url}: {e}")))
                .and_then(|resp| decode(&url, resp));
            match result {
                Err(e) if e.is_retryable() && attempt < self.retries => {
                    warn!(%url, attempt, error = %e, "retrying sidecar request");
                    thread::sleep(self.backoff * 2u32.pow(attempt));
                    attempt += 1;
                }
                other => return other,
            }
        }
    }

    fn classify_chunk(&self, chunk: &[SentencePair]) -> Result<Vec<NliDistribution<f64>>, BackendError> {
        let resp: NliBatchResponse = self.post_json(
            NLI_BATCH_PATH,
            &NliBatchRequest {
                pairs: chunk.to_vec(),
            },
        )?;
        if resp.distributions.len() != chunk.len() {
            return Err(BackendError::Malformed(format!(
                "{} distributions for {} pairs",
                resp.distributions.len(),
                chunk.len()
            )));
        }
        Ok(resp.distributions)
    }
}

fn decode<Resp: DeserializeOwned>(url: &str, resp: reqwest::blocking::Response) -> Result<Resp, BackendError> {
    let status = resp.status();
    if status.is_server_error() {
        return Err(BackendError::Unavailable(format!("{url}: HTTP {status}")));
    }
    if !status.is_success() {
        let body = resp.text().unwrap_or_default();
        return Err(BackendError::Rejected(format!("{url}: HTTP {status} {body}")));
    }
    resp.json::<Resp>()
        .map_err(|e| BackendError::Malformed(format!("{url}: {e}")))
}

impl<T: Scalar> NliBackend<T> for SidecarClient {
    /// Sends pairs in chunks of at most the batch size, up to
    /// `parallelism` chunks at a time; results keep input order.
    fn classify(&self, pairs: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError> {
        let chunks: Vec<&[SentencePair]> = pairs.chunks(self.batch_size).collect();
        let mut out = Vec::with_capacity(pairs.len());
        for wave in chunks.chunks(self.parallelism) {
            let results: Vec<Result<Vec<NliDistribution<f64>>, BackendError>> = if wave.len() == 1 {
                vec![self.classify_chunk(wave[0])]
            } else {
                thread::scope(|s| {
                    let handles: Vec<_> = wave.iter().map(|c| s.spawn(|| self.classify_chunk(c))).collect();
                    handles
                        .into_iter()
                        .map(|h| h.join().expect("batch worker panicked"))
                        .collect()
                })
            };
            for r in results {
                out.extend(r?.iter().map(NliDistribution::cast::<T>));
            }
        }
        Ok(out)
    }
}

impl<T: Scalar> ConsistencyBackend<T> for SidecarClient {
    fn consistency(&self, document: &str, claim: &str) -> Result<T, BackendError> {
        let resp: ConsistencyResponse = self.post_json(
            CONSISTENCY_PATH,
            &ConsistencyRequest {
                document: document.to_string(),
                claim: claim.to_string(),
            },
        )?;
        Ok(T::lit(resp.score))
    }
}
