//! Test support: a logging stub HTTP server and paths to the recorded
//! fixture sets.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Instant;

use tiny_http::{Header, Response, Server};

pub const VERSTAPPEN_HEADLINE: &str = "Max Verstappen wins 2023 F1 world title";
pub const VERSTAPPEN_QUESTION: &str = "Who won the 2023 Formula 1 World Championship?";
/// Number-swapped headline; its recorded search page has no answer box and
/// no people-also-asked section.
pub const VERSTAPPEN_SWAPPED: &str = "Max Verstappen wins 2013 F1 world title";
pub const GUARDIAN_URL: &str =
    "https://www.guardian.example/sport/2023/oct/07/max-verstappen-crowned-formula-one-world-champion";
pub const MEMBERS_URL: &str = "https://www.motorsport-daily.example/members/verstappen-title-analysis";

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().expect("workspace root exists")
}

pub fn verstappen_fixtures() -> PathBuf {
    workspace_root().join("fixtures/verstappen")
}

/// Twenty headlines in true/fake pairs, with `eval.csv` and `slm.json`.
pub fn evalset_fixtures() -> PathBuf {
    workspace_root().join("fixtures/evalset")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StubResponse {
    pub status: u16,
    pub body: String,
    pub content_type: &'static str,
}

impl StubResponse {
    pub fn html(body: impl Into<String>) -> Self {
        Self { status: 200, body: body.into(), content_type: "text/html; charset=utf-8" }
    }

    pub fn text(body: impl Into<String>) -> Self {
        Self { status: 200, body: body.into(), content_type: "text/plain; charset=utf-8" }
    }

    pub fn json(body: impl Into<String>) -> Self {
        Self { status: 200, body: body.into(), content_type: "application/json" }
    }

    pub fn status(status: u16) -> Self {
        Self { status, body: String::new(), content_type: "text/plain" }
    }
}

#[derive(Debug, Clone)]
pub struct LoggedRequest {
    pub method: String,
    /// Path including any query string.
    pub url: String,
    pub body: String,
    pub at: Instant,
}

type Handler = dyn Fn(&str, &str, &str) -> StubResponse + Send + Sync;

/// Local HTTP server that records every request and answers through a
/// handler `(method, url, body) -> response`.
pub struct StubServer {
    server: Arc<Server>,
    worker: Option<JoinHandle<()>>,
    log: Arc<Mutex<Vec<LoggedRequest>>>,
    base: String,
}

impl StubServer {
    pub fn start(handler: impl Fn(&str, &str, &str) -> StubResponse + Send + Sync + 'static) -> Self {
        let server = Arc::new(Server::http("127.0.0.1:0").expect("bind stub server"));
        let addr = server.server_addr().to_ip().expect("tcp listener");
        let base = format!("http://{addr}");
        let log: Arc<Mutex<Vec<LoggedRequest>>> = Arc::default();
        let handler: Arc<Handler> = Arc::new(handler);
        let worker = {
            let server = server.clone();
            let log = log.clone();
            std::thread::spawn(move || {
                for mut req in server.incoming_requests() {
                    let mut body = String::new();
                    let _ = req.as_reader().read_to_string(&mut body);
                    let method = req.method().as_str().to_string();
                    let url = req.url().to_string();
                    log.lock().unwrap().push(LoggedRequest {
                        method: method.clone(),
                        url: url.clone(),
                        body: body.clone(),
                        at: Instant::now(),
                    });
                    let out = handler(&method, &url, &body);
                    let header = Header::from_bytes("Content-Type", out.content_type).expect("valid header");
                    let resp = Response::from_string(out.body).with_status_code(out.status).with_header(header);
                    let _ = req.respond(resp);
                }
            })
        };
        Self { server, worker: Some(worker), log, base }
    }

    /// Serves a fixed path → response table; anything else is a 404.
    pub fn with_routes(routes: HashMap<String, StubResponse>) -> Self {
        Self::start(move |_, url, _| routes.get(url).cloned().unwrap_or_else(|| StubResponse::status(404)))
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub fn requests(&self) -> Vec<LoggedRequest> {
        self.log.lock().unwrap().clone()
    }

    /// Requested paths (with query strings) in arrival order.
    pub fn paths(&self) -> Vec<String> {
        self.requests().into_iter().map(|r| r.url).collect()
    }

    pub fn request_count(&self) -> usize {
        self.log.lock().unwrap().len()
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}
