use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use url::Url;

use crate::error::RetrievalError;
use crate::robots::RobotsPolicy;
use crate::transport::{FetchResponse, Transport};

pub const DEFAULT_MIN_DELAY: Duration = Duration::from_millis(500);

#[derive(Default)]
struct HostSlot {
    last_request: Option<Instant>,
}

/// Robots-enforcing, per-host serialized fetcher.
///
/// Every request, including the search page itself, is checked against the
/// target host's robots.txt before it is issued. Requests to one host never
/// overlap and are spaced by at least `min_delay`.
pub struct PoliteClient<T: Transport> {
    transport: T,
    user_agent: String,
    min_delay: Duration,
    robots: Mutex<HashMap<String, Arc<RobotsPolicy>>>,
    hosts: Mutex<HashMap<String, Arc<Mutex<HostSlot>>>>,
}

fn authority(url: &Url) -> Result<String, RetrievalError> {
    let host = url.host_str().ok_or_else(|| RetrievalError::InvalidUrl {
        url: url.to_string(),
        reason: "no host".into(),
    })?;
    Ok(match url.port() {
        Some(p) => format!("{host}:{p}"),
        None => host.to_string(),
    })
}

fn path_and_query(url: &Url) -> String {
    match url.query() {
        Some(q) => format!("{}?{q}", url.path()),
        None => url.path().to_string(),
    }
}

impl<T: Transport> PoliteClient<T> {
    pub fn new(transport: T, user_agent: impl Into<String>, min_delay: Duration) -> Self {
        Self {
            transport,
            user_agent: user_agent.into(),
            min_delay,
            robots: Mutex::new(HashMap::new()),
            hosts: Mutex::new(HashMap::new()),
        }
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    pub fn user_agent(&self) -> &str {
        &self.user_agent
    }

    fn slot(&self, host: &str) -> Arc<Mutex<HostSlot>> {
        self.hosts.lock().expect("host table poisoned").entry(host.to_string()).or_default().clone()
    }

    /// Issues one request under the host's slot, honouring the delay.
    fn paced_get(&self, host: &str, url: &Url) -> Result<FetchResponse, RetrievalError> {
        let slot = self.slot(host);
        let mut slot = slot.lock().expect("host slot poisoned");
        if let Some(last) = slot.last_request {
            let wait = self.min_delay.saturating_sub(last.elapsed());
            if !wait.is_zero() {
                std::thread::sleep(wait);
            }
        }
        let result = self.transport.get(url);
        slot.last_request = Some(Instant::now());
        result
    }

    /// Cached robots policy for the URL's host. Failures and 5xx produce a
    /// permissive policy with a warning; 4xx a permissive one without.
    pub fn robots_for(&self, url: &Url) -> Result<Arc<RobotsPolicy>, RetrievalError> {
        let host = authority(url)?;
        if let Some(p) = self.robots.lock().expect("robots cache poisoned").get(&host) {
            return Ok(p.clone());
        }
        let mut robots_url = url.clone();
        robots_url.set_path("/robots.txt");
        robots_url.set_query(None);
        robots_url.set_fragment(None);
        let policy = match self.paced_get(&host, &robots_url) {
            Ok(r) if r.is_success() => RobotsPolicy::parse(&host, &r.body),
            Ok(r) if r.status >= 500 => {
                tracing::warn!(%host, status = r.status, "robots.txt unavailable; assuming allow-all");
                RobotsPolicy::allow_all_with_warning(&host, format!("robots.txt returned {}", r.status))
            }
            Ok(_) => RobotsPolicy::allow_all(&host),
            Err(e) => {
                tracing::warn!(%host, error = %e, "robots.txt fetch failed; assuming allow-all");
                RobotsPolicy::allow_all_with_warning(&host, e.to_string())
            }
        };
        let policy = Arc::new(policy);
        let mut cache = self.robots.lock().expect("robots cache poisoned");
        Ok(cache.entry(host).or_insert(policy).clone())
    }

    pub fn is_allowed(&self, url: &Url) -> Result<bool, RetrievalError> {
        let policy = self.robots_for(url)?;
        Ok(policy.is_allowed(&path_and_query(url), &self.user_agent))
    }

    /// Fetches `url` if robots.txt allows it; disallowed URLs are never
    /// requested.
    pub fn fetch(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
        if !matches!(url.scheme(), "http" | "https") {
            return Err(RetrievalError::InvalidUrl { url: url.to_string(), reason: "not http(s)".into() });
        }
        if !self.is_allowed(url)? {
            tracing::info!(%url, "skipping robots-disallowed url");
            return Err(RetrievalError::Disallowed { url: url.to_string() });
        }
        let host = authority(url)?;
        self.paced_get(&host, url)
    }

    /// Fetches and returns the body of a 2xx answer.
    pub fn fetch_body(&self, url: &Url) -> Result<String, RetrievalError> {
        self.fetch(url)?.into_body()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::RecordingTransport;

    struct Scripted {
        robots: Option<(u16, &'static str)>,
    }

    impl Transport for Scripted {
        fn get(&self, url: &Url) -> Result<FetchResponse, RetrievalError> {
            if url.path() == "/robots.txt" {
                return match self.robots {
                    Some((status, body)) => Ok(FetchResponse { url: url.to_string(), status, body: body.into() }),
                    None => Err(RetrievalError::Transport { url: url.to_string(), message: "down".into(), retryable: true }),
                };
            }
            Ok(FetchResponse { url: url.to_string(), status: 200, body: "ok".into() })
        }
    }

    fn client(robots: Option<(u16, &'static str)>) -> PoliteClient<RecordingTransport<Scripted>> {
        PoliteClient::new(RecordingTransport::new(Scripted { robots }), "veritas-bot/0.1", Duration::ZERO)
    }

    fn u(s: &str) -> Url {
        Url::parse(s).unwrap()
    }

    #[test]
    fn disallowed_urls_are_never_requested() {
        let c = client(Some((200, "User-agent: *\nDisallow: /private\n")));
        assert!(matches!(c.fetch(&u("http://h/private/a")), Err(RetrievalError::Disallowed { .. })));
        assert_eq!(c.fetch_body(&u("http://h/public")).unwrap(), "ok");
        assert_eq!(c.transport().requests(), vec!["http://h/robots.txt", "http://h/public"]);
    }

    #[test]
    fn robots_is_fetched_once_per_host() {
        let c = client(Some((200, "")));
        c.fetch(&u("http://h/a")).unwrap();
        c.fetch(&u("http://h/b")).unwrap();
        c.fetch(&u("http://h:8080/c")).unwrap();
        let robots = c.transport().requests().iter().filter(|r| r.ends_with("/robots.txt")).count();
        assert_eq!(robots, 2);
    }

    #[test]
    fn query_strings_are_checked() {
        let c = client(Some((200, "User-agent: *\nDisallow: /search?\n")));
        assert!(c.fetch(&u("http://h/search?q=x")).is_err());
        assert!(c.fetch(&u("http://h/search")).is_ok());
    }

    #[test]
    fn unavailable_robots_allows_with_warning() {
        let c = client(None);
        assert!(c.fetch(&u("http://h/x")).is_ok());
        assert!(c.robots_for(&u("http://h/")).unwrap().warning().is_some());
        let c = client(Some((503, "")));
        assert!(c.robots_for(&u("http://h/")).unwrap().warning().is_some());
        let c = client(Some((404, "")));
        let p = c.robots_for(&u("http://h/")).unwrap();
        assert!(p.warning().is_none());
        assert!(p.is_allowed("/anything", "veritas-bot"));
    }

    #[test]
    fn requests_to_one_host_are_spaced() {
        let c = PoliteClient::new(Scripted { robots: Some((200, "")) }, "veritas-bot", Duration::from_millis(40));
        let start = Instant::now();
        c.fetch(&u("http://h/a")).unwrap();
        c.fetch(&u("http://h/b")).unwrap();
        // robots + two pages: two enforced gaps
        assert!(start.elapsed() >= Duration::from_millis(80));
    }

    #[test]
    fn rejects_non_http_schemes() {
        let c = client(Some((200, "")));
        assert!(matches!(c.fetch(&u("file:///etc/passwd")), Err(RetrievalError::InvalidUrl { .. })));
    }
}
