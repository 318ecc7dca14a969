use std::sync::{Arc, Mutex};
use std::time::Duration;

use url::Url;

use crate::error::RetrievalError;
use crate::fixtures::FixtureStore;

pub const DEFAULT_USER_AGENT: &str = "veritas-bot/0.1";
pub const DEFAULT_FETCH_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchResponse {
    pub url: String,
    pub status: u16,
    pub body: String,
}

impl FetchResponse {
    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }

    /// The body for a 2xx answer, a status error otherwise.
    pub fn into_body(self) -> Result<String, RetrievalError> {
        if self.is_success() {
            Ok(self.body)
        } else {
            Err(RetrievalError::Status { url: self.url, status: self.status })
        }
    }
}

/// Raw GET. Implementations do not consult robots.txt; that is the job of
/// [`crate::PoliteClient`].
pub trait Transport: Send + Sync {
    fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError>;

    /// True when the transport never touches the network.
    fn is_offline(&self) -> bool {
        false
    }
}

impl<T: Transport + ?Sized> Transport for Arc<T> {
    fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        (**self).get(url)
    }

    fn is_offline(&self) -> bool {
        (**self).is_offline()
    }
}

impl<T: Transport + ?Sized> Transport for Box<T> {
    fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        (**self).get(url)
    }

    fn is_offline(&self) -> bool {
        (**self).is_offline()
    }
}

/// Blocking HTTP transport with a per-request timeout and bounded retries on
/// transport errors and 5xx answers.
#[derive(Debug, Clone)]
pub struct HttpTransport {
    client: reqwest::blocking::Client,
    retries: u32,
    backoff: Duration,
}

impl HttpTransport {
    pub fn new(user_agent: &str, timeout: Duration) -> Result<Self, RetrievalError> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(user_agent)
            .timeout(timeout)
            .build()
            .map_err(|e| RetrievalError::InvalidArgument(format!("http client: {e}")))?;
        Ok(Self { client, retries: 2, backoff: Duration::from_millis(250) })
    }

    pub fn with_retries(mut self, retries: u32, backoff: Duration) -> Self {
        self.retries = retries;
        self.backoff = backoff;
        self
    }

    fn attempt(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        let resp = self.client.get(url.as_str()).send().map_err(|e| RetrievalError::Transport {
            url: url.to_string(),
            message: e.to_string(),
            retryable: e.is_timeout() || e.is_connect() || e.is_request(),
        })?;
        let status = resp.status().as_u16();
        let final_url = resp.url().to_string();
        let body = resp.text().map_err(|e| RetrievalError::Transport {
            url: url.to_string(),
            message: format!("reading body: {e}"),
            retryable: true,
        })?;
        Ok(FetchResponse { url: final_url, status, body })
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        let mut delay = self.backoff;
        let mut attempt = 0;
        loop {
            let result = self.attempt(url);
            let retry = match &result {
                Ok(r) => r.status >= 500,
                Err(e) => e.is_retryable(),
            };
            if !retry || attempt >= self.retries {
                return result;
            }
            attempt += 1;
            tracing::debug!(%url, attempt, "retrying fetch");
            std::thread::sleep(delay);
            delay *= 2;
        }
    }
}

/// Serves recorded pages from a [`FixtureStore`]; unknown URLs answer 404.
#[derive(Debug, Clone)]
pub struct FixtureTransport {
    store: Arc<FixtureStore>,
}

impl FixtureTransport {
    pub fn new(store: Arc<FixtureStore>) -> Self {
        Self { store }
    }

    pub fn store(&self) -> &Arc<FixtureStore> {
        &self.store
    }
}

impl Transport for FixtureTransport {
    fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        Ok(match self.store.page(url.as_str())? {
            Some(body) => FetchResponse { url: url.to_string(), status: 200, body },
            None => FetchResponse { url: url.to_string(), status: 404, body: String::new() },
        })
    }

    fn is_offline(&self) -> bool {
        true
    }
}

/// Wraps a transport and records every URL requested through it.
#[derive(Debug, Default)]
pub struct RecordingTransport<T> {
    inner: T,
    log: Mutex<Vec<String>>,
}

impl<T: Transport> RecordingTransport<T> {
    pub fn new(inner: T) -> Self {
        Self { inner, log: Mutex::new(Vec::new()) }
    }

    pub fn requests(&self) -> Vec<String> {
        self.log.lock().expect("request log poisoned").clone()
    }

    pub fn request_count(&self) -> usize {
        self.log.lock().expect("request log poisoned").len()
    }
}

impl<T: Transport> Transport for RecordingTransport<T> {
    fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        self.log.lock().expect("request log poisoned").push(url.to_string());
        self.inner.get(url)
    }

    fn is_offline(&self) -> bool {
        self.inner.is_offline()
    }
}

/// Transport that refuses every request; stands in for "no network".
#[derive(Debug, Clone, Copy, Default)]
pub struct OfflineTransport;

impl Transport for OfflineTransport {
    fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        Err(RetrievalError::Transport {
            url: url.to_string(),
            message: "network access disabled".into(),
            retryable: false,
        })
    }

    fn is_offline(&self) -> bool {
        true
    }
}
