//! Exercises the sidecar wire format against a local stub server.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use serde_json::{json, Value};
use tiny_http::{Header, Response, Server};
use veritas_nli::mock::HashNli;
use veritas_nli::wire::{NliBatchRequest, MAX_NLI_BATCH};
use veritas_nli::{factcc_classify, BackendError, ConsistencyBackend, NliBackend, NliDistribution, SentencePair, SidecarClient};

struct Stub {
    url: String,
    server: Arc<Server>,
    log: Arc<Mutex<Vec<(String, Value)>>>,
}

impl Drop for Stub {
    fn drop(&mut self) {
        self.server.unblock();
    }
}

/// `fail_first` leading requests get a 503.
fn stub(fail_first: usize) -> Stub {
    let server = Arc::new(Server::http("127.0.0.1:0").unwrap());
    let url = format!("http://{}", server.server_addr().to_ip().unwrap());
    let log = Arc::new(Mutex::new(Vec::new()));
    let seen = AtomicUsize::new(0);
    let (srv, lg) = (server.clone(), log.clone());
    thread::spawn(move || {
        for mut req in srv.incoming_requests() {
            let mut body = String::new();
            req.as_reader().read_to_string(&mut body).unwrap();
            let path = req.url().to_string();
            let parsed: Value = serde_json::from_str(&body).unwrap_or(Value::Null);
            lg.lock().unwrap().push((path.clone(), parsed.clone()));
            let n = seen.fetch_add(1, Ordering::SeqCst);
            let (code, out) = if n < fail_first {
                (503, json!({"error": "model loading"}))
            } else {
                route(&path, &parsed)
            };
            let resp = Response::from_string(out.to_string())
                .with_status_code(code)
                .with_header(Header::from_bytes("Content-Type", "application/json").unwrap());
            let _ = req.respond(resp);
        }
    });
    Stub { url, server, log }
}

fn route(path: &str, body: &Value) -> (u16, Value) {
    match path {
        "/healthz" => (200, json!({"ready": true, "mock": true})),
        "/v1/nli/batch" => {
            let Ok(req) = serde_json::from_value::<NliBatchRequest>(body.clone()) else {
                return (400, json!({"error": "malformed"}));
            };
            if req.pairs.is_empty() {
                return (400, json!({"error": "empty batch"}));
            }
            if req.pairs.len() > MAX_NLI_BATCH {
                return (413, json!({"error": "batch too large"}));
            }
            let ds: Vec<NliDistribution<f64>> = req.pairs.iter().map(|p| HashNli { seed: 1 }.distribution(p)).collect();
            (200, json!({ "distributions": ds }))
        }
        "/v1/consistency" => {
            let doc = body["document"].as_str().unwrap_or("");
            let claim = body["claim"].as_str().unwrap_or("");
            let score = if doc.contains(claim) { 0.9992 } else { 0.1 };
            (200, json!({ "score": score }))
        }
        _ => (404, json!({"error": "not found"})),
    }
}

fn client(url: &str) -> SidecarClient {
    SidecarClient::new(url).unwrap().retries(2, Duration::from_millis(5))
}

#[test]
fn batches_are_chunked_and_ordered() {
    let s = stub(0);
    let pairs: Vec<SentencePair> = (0..600).map(|i| SentencePair::new(format!("premise {i}"), "hypothesis")).collect();
    let got: Vec<NliDistribution<f64>> = client(&s.url).classify(&pairs).unwrap();
    assert_eq!(got.len(), 600);
    for (p, d) in pairs.iter().zip(&got) {
        let want = HashNli { seed: 1 }.distribution::<f64>(p);
        assert!((d.entail - want.entail).abs() < 1e-12 && (d.contradict - want.contradict).abs() < 1e-12);
        d.validate().unwrap();
    }
    let log = s.log.lock().unwrap();
    let sizes: Vec<usize> = log.iter().map(|(_, b)| b["pairs"].as_array().unwrap().len()).collect();
    assert_eq!(sizes.len(), 3);
    assert!(sizes.iter().all(|n| *n <= MAX_NLI_BATCH));
    assert_eq!(sizes.iter().sum::<usize>(), 600);
}

#[test]
fn identical_requests_identical_answers() {
    let s = stub(0);
    let pairs = vec![SentencePair::new("Max Verstappen was crowned champion", "Max Verstappen wins title")];
    let c = client(&s.url);
    let a: Vec<NliDistribution<f32>> = c.classify(&pairs).unwrap();
    let b: Vec<NliDistribution<f32>> = c.classify(&pairs).unwrap();
    assert_eq!(a, b);
}

#[test]
fn retries_unavailable_then_succeeds() {
    let s = stub(2);
    let score: f64 = client(&s.url).consistency("Max Verstappen wins", "Max Verstappen").unwrap();
    assert_eq!(score, 0.9992);
    assert_eq!(s.log.lock().unwrap().len(), 3);
}

#[test]
fn gives_up_after_retries() {
    let s = stub(10);
    let err = ConsistencyBackend::<f64>::consistency(&client(&s.url), "a", "b").unwrap_err();
    assert!(err.is_retryable());
    assert_eq!(s.log.lock().unwrap().len(), 3);
}

#[test]
fn client_errors_are_not_retried() {
    let s = stub(0);
    let c = client(&s.url);
    let err: Result<Value, _> = c.post_json("/v1/nli/batch", &json!({"pairs": []}));
    assert!(matches!(err, Err(BackendError::Rejected(_))));
    assert_eq!(s.log.lock().unwrap().len(), 1);
}

#[test]
fn health_and_factcc_over_the_wire() {
    let s = stub(0);
    let c = client(&s.url);
    assert!(c.health().unwrap().ready);
    let (score, verdict) = factcc_classify::<f64, _>(
        "Max Verstappen wins 2023 F1 world title, the BBC reported.",
        "Max Verstappen wins 2023 F1 world title",
        &c,
    )
    .unwrap();
    assert_eq!(score, 0.9992);
    assert!(verdict.is_reliable());
}

#[test]
fn unreachable_sidecar_is_retryable() {
    let c = SidecarClient::with_timeout("http://127.0.0.1:9", Duration::from_millis(200))
        .unwrap()
        .retries(0, Duration::ZERO);
    let err = NliBackend::<f64>::classify(&c, &[SentencePair::new("a", "b")]).unwrap_err();
    assert!(err.is_retryable());
}
