use std::sync::Arc;
use std::time::Duration;

use veritas_core::Stage;
use veritas_retrieval::{HttpTransport, RetrievalError, Retriever, SearchProvider, Strategy};
use veritas_testkit::{StubResponse, StubServer};

const UA: &str = "veritas-bot/0.1";

fn article(title: &str, para: &str) -> String {
    format!("<html><body><nav><p>Home News Sport Weather Travel</p></nav><h1>{title}</h1><p>{para}</p></body></html>")
}

fn serp(base: &str, paths: &[&str]) -> String {
    let results: String = paths
        .iter()
        .map(|p| format!(r#"<div class="g"><a href="{base}{p}"><h3>Result {p}</h3></a></div>"#))
        .collect();
    format!("<html><body><div id=\"search\">{results}</div></body></html>")
}

/// News site whose robots.txt disallows `/private`.
fn news_server(robots_status: u16) -> StubServer {
    let base = Arc::new(std::sync::OnceLock::<String>::new());
    let b = base.clone();
    let server = StubServer::start(move |_, url, _| {
        let base = b.get().cloned().unwrap_or_default();
        match url {
            "/robots.txt" if robots_status == 200 => StubResponse::text("User-agent: *\nDisallow: /private\n"),
            "/robots.txt" => StubResponse::status(robots_status),
            u if u.starts_with("/search?") => StubResponse::html(serp(&base, &["/news/a", "/private/secret", "/news/b", "/news/c"])),
            "/news/a" => StubResponse::html(article("Alpha story", "The first article body has plenty of words in it.")),
            "/news/b" => StubResponse::html(article("Beta story", "The second article body has plenty of words in it.")),
            "/news/c" => StubResponse::html(article("Gamma story", "The third article body has plenty of words in it.")),
            "/private/secret" => StubResponse::html(article("Secret", "This page must never be requested by the crawler.")),
            _ => StubResponse::status(404),
        }
    });
    base.set(server.base_url().to_string()).unwrap();
    server
}

fn live(server: &StubServer, min_delay: Duration) -> Retriever {
    let transport = HttpTransport::new(UA, Duration::from_secs(5)).unwrap().with_retries(2, Duration::from_millis(10));
    let provider = SearchProvider::live(&server.url("/search")).unwrap();
    Retriever::new(Box::new(transport), provider, UA, min_delay)
}

#[test]
fn disallowed_paths_are_never_requested() {
    let server = news_server(200);
    let r = live(&server, Duration::ZERO);
    let hits = r.search("anything", 3).unwrap();
    assert_eq!(hits.iter().map(|h| h.rank).collect::<Vec<_>>(), vec![1, 2, 3]);
    assert!(hits[1].url.ends_with("/news/b"));

    let ev = r.retrieve_evidence("anything", Strategy::ArticlesOnly, 3).unwrap();
    assert_eq!(ev.stage(), Stage::Articles);
    let titles: Vec<_> = ev.passages().iter().map(|p| p.text.lines().next().unwrap().to_string()).collect();
    assert_eq!(titles, vec!["Alpha story", "Beta story", "Gamma story"]);

    let ev = r.retrieve_evidence("anything", Strategy::QuickAnswerChain, 10).unwrap();
    assert_eq!(ev.stage(), Stage::Articles);
    assert_eq!(ev.passages().len(), 3);

    let paths = server.paths();
    assert!(!paths.iter().any(|p| p.starts_with("/private")), "{paths:?}");
    assert_eq!(paths.iter().filter(|p| *p == "/robots.txt").count(), 1);
}

#[test]
fn requests_to_a_host_are_paced() {
    let server = news_server(200);
    let gap = Duration::from_millis(60);
    let r = live(&server, gap).with_workers(4);
    r.retrieve_evidence("anything", Strategy::ArticlesOnly, 3).unwrap();
    let log = server.requests();
    assert!(log.len() >= 5);
    for pair in log.windows(2) {
        // server-side arrival times; allow a little scheduling slack
        assert!(pair[1].at.duration_since(pair[0].at) + Duration::from_millis(5) >= gap);
    }
}

#[test]
fn unavailable_robots_means_allow_all() {
    let server = news_server(500);
    let r = live(&server, Duration::ZERO);
    let hits = r.search("anything", 4).unwrap();
    assert_eq!(hits.len(), 4);
    let policy = r.client().robots_for(&url::Url::parse(server.base_url()).unwrap()).unwrap();
    assert!(policy.warning().is_some());
}

#[test]
fn search_outage_is_retryable_after_bounded_retries() {
    let server = StubServer::start(|_, url, _| match url {
        "/robots.txt" => StubResponse::status(404),
        _ => StubResponse::status(503),
    });
    let r = live(&server, Duration::ZERO);
    let err = r.search("anything", 3).unwrap_err();
    assert!(err.is_retryable(), "{err:?}");
    let searches = server.paths().iter().filter(|p| p.starts_with("/search")).count();
    assert_eq!(searches, 3);
}

#[test]
fn disallowed_search_page_is_refused() {
    let server = StubServer::start(|_, url, _| match url {
        "/robots.txt" => StubResponse::text("User-agent: *\nDisallow: /search\n"),
        _ => StubResponse::html("<html></html>"),
    });
    let r = live(&server, Duration::ZERO);
    assert!(matches!(r.search("anything", 3), Err(RetrievalError::Disallowed { .. })));
    assert_eq!(server.paths(), vec!["/robots.txt"]);
}

#[test]
fn unreachable_host_is_a_retryable_transport_error() {
    let transport = HttpTransport::new(UA, Duration::from_secs(2)).unwrap().with_retries(0, Duration::ZERO);
    let provider = SearchProvider::live("http://127.0.0.1:9/search").unwrap();
    let r = Retriever::new(Box::new(transport), provider, UA, Duration::ZERO);
    // robots failure degrades to allow-all; the search request itself fails
    let err = r.search("anything", 3).unwrap_err();
    assert!(err.is_retryable());
}
