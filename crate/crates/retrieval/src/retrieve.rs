use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use url::Url;
use veritas_core::{EvidenceBundle, Passage, Stage};

use crate::error::RetrievalError;
use crate::extract::{extract_article, extract_people_also_asked, extract_quick_answer, extract_result_links};
use crate::fixtures::FixtureStore;
use crate::polite::{PoliteClient, DEFAULT_MIN_DELAY};
use crate::search::{search_url, SearchHit, SearchProvider, SerpPage};
use crate::selectors::Selectors;
use crate::transport::{FixtureTransport, HttpTransport, Transport, DEFAULT_FETCH_TIMEOUT};

pub const DEFAULT_TOP_K: usize = 3;
pub const DEFAULT_WORKERS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Quick answer, then people-also-asked, then top-K articles.
    QuickAnswerChain,
    ArticlesOnly,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::QuickAnswerChain => "quick_answer_chain",
            Strategy::ArticlesOnly => "articles_only",
        }
    }
}

impl FromStr for Strategy {
    type Err = RetrievalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quick_answer_chain" | "chain" => Ok(Strategy::QuickAnswerChain),
            "articles_only" | "articles" => Ok(Strategy::ArticlesOnly),
            other => Err(RetrievalError::InvalidArgument(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Search plus evidence retrieval over one transport and search provider.
pub struct Retriever {
    client: PoliteClient<Box<dyn Transport>>,
    provider: SearchProvider,
    selectors: Arc<Selectors>,
    workers: usize,
}

impl Retriever {
    pub fn new(transport: Box<dyn Transport>, provider: SearchProvider, user_agent: &str, min_delay: Duration) -> Self {
        Self {
            client: PoliteClient::new(transport, user_agent, min_delay),
            provider,
            selectors: Arc::new(Selectors::default()),
            workers: DEFAULT_WORKERS,
        }
    }

    /// Offline replay of a fixture directory; no pacing.
    pub fn fixture(store: Arc<FixtureStore>) -> Self {
        let transport = Box::new(FixtureTransport::new(store.clone()));
        Self::new(transport, SearchProvider::fixture(store), crate::DEFAULT_USER_AGENT, Duration::ZERO)
    }

    /// Live fetching with the default timeout, retries and pacing.
    pub fn live(user_agent: &str, search_base: &str) -> Result<Self, RetrievalError> {
        let transport = Box::new(HttpTransport::new(user_agent, DEFAULT_FETCH_TIMEOUT)?);
        Ok(Self::new(transport, SearchProvider::live(search_base)?, user_agent, DEFAULT_MIN_DELAY))
    }

    pub fn with_selectors(mut self, selectors: Selectors) -> Self {
        self.selectors = Arc::new(selectors);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn provider(&self) -> &SearchProvider {
        &self.provider
    }

    pub fn client(&self) -> &PoliteClient<Box<dyn Transport>> {
        &self.client
    }

    pub fn is_offline(&self) -> bool {
        self.client.transport().is_offline()
    }

    /// Identifies the evidence source in cache keys: the fixture digest, or
    /// the live search base.
    pub fn source_id(&self) -> String {
        match &self.provider {
            SearchProvider::Fixture { store, .. } => format!("fixtures:{}", store.digest()),
            SearchProvider::Live { base_url } => format!("live:{base_url}"),
        }
    }

    /// The search page for `query`, or `None` when a fixture set has no
    /// recording for it.
    pub fn fetch_serp(&self, query: &str) -> Result<Option<SerpPage>, RetrievalError> {
        let url = search_url(self.provider.base_url(), query);
        match &self.provider {
            SearchProvider::Fixture { store, .. } => Ok(store.serp(query)?.map(|body| SerpPage { url, body })),
            SearchProvider::Live { .. } => {
                let body = self.client.fetch_body(&url)?;
                Ok(Some(SerpPage { url, body }))
            }
        }
    }

    /// Top-`k` organic hits, with robots-disallowed URLs removed before
    /// truncation and ranks renumbered from 1.
    pub fn search(&self, query: &str, k: usize) -> Result<Vec<SearchHit>, RetrievalError> {
        check_k(k)?;
        match self.fetch_serp(query)? {
            Some(page) => self.hits_from(&page, k),
            None => Ok(Vec::new()),
        }
    }

    fn hits_from(&self, page: &SerpPage, k: usize) -> Result<Vec<SearchHit>, RetrievalError> {
        let mut hits = Vec::new();
        for link in extract_result_links(&page.body, &page.url, &self.selectors) {
            if hits.len() == k {
                break;
            }
            let url = Url::parse(&link.url).expect("extracted links are absolute");
            if !self.client.is_allowed(&url)? {
                tracing::info!(url = %link.url, "dropping robots-disallowed result");
                continue;
            }
            hits.push(SearchHit { rank: hits.len() + 1, url: link.url, title: link.title });
        }
        Ok(hits)
    }

    /// Article passages for `hits` in rank order. Pages that fail to load or
    /// yield no text are skipped.
    pub fn fetch_articles(&self, hits: &[SearchHit]) -> Vec<Passage> {
        let slots: Vec<Mutex<Option<Passage>>> = hits.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        let workers = self.workers.min(hits.len()).max(1);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(hit) = hits.get(i) else { break };
                    if let Some(p) = self.article_passage(hit) {
                        *slots[i].lock().expect("article slot poisoned") = Some(p);
                    }
                });
            }
        });
        slots.into_iter().filter_map(|m| m.into_inner().expect("article slot poisoned")).collect()
    }

    fn article_passage(&self, hit: &SearchHit) -> Option<Passage> {
        let url = Url::parse(&hit.url).ok()?;
        let body = match self.client.fetch_body(&url) {
            Ok(b) => b,
            Err(e) => {
                tracing::warn!(url = %hit.url, error = %e, "article fetch failed");
                return None;
            }
        };
        let article = extract_article(&body, &self.selectors);
        if article.is_empty() {
            return None;
        }
        Some(Passage { source_url: hit.url.clone(), text: article.to_passage() })
    }

    /// Runs the retrieval strategy and returns the first stage that yields
    /// at least one passage. `scrape_seconds` covers the whole call.
    pub fn retrieve_evidence(&self, query: &str, strategy: Strategy, k: usize) -> Result<EvidenceBundle, RetrievalError> {
        check_k(k)?;
        if query.trim().is_empty() {
            return Err(RetrievalError::InvalidArgument("query is empty".into()));
        }
        let start = Instant::now();
        let mut attempted = Vec::new();
        let serp = self.fetch_serp(query)?;
        let found = match strategy {
            Strategy::QuickAnswerChain => self.chain(serp.as_ref(), k, &mut attempted)?,
            Strategy::ArticlesOnly => {
                attempted.push(Stage::Articles);
                self.articles_stage(serp.as_ref(), k)?.map(|p| (Stage::Articles, p))
            }
        };
        let Some((stage, passages)) = found else {
            return Err(RetrievalError::NoEvidence { query: query.to_string(), attempted });
        };
        EvidenceBundle::new(query, stage, passages, start.elapsed().as_secs_f64())
            .map_err(|e| RetrievalError::InvalidArgument(e.to_string()))
    }

    fn chain(
        &self,
        serp: Option<&SerpPage>,
        k: usize,
        attempted: &mut Vec<Stage>,
    ) -> Result<Option<(Stage, Vec<Passage>)>, RetrievalError> {
        attempted.push(Stage::QuickAnswer);
        if let Some(page) = serp {
            if let Some(answer) = extract_quick_answer(&page.body, &self.selectors) {
                let passage = Passage { source_url: page.url.to_string(), text: answer };
                return Ok(Some((Stage::QuickAnswer, vec![passage])));
            }
        }
        attempted.push(Stage::PeopleAlsoAsked);
        if let Some(page) = serp {
            let passages: Vec<Passage> = extract_people_also_asked(&page.body, &page.url, &self.selectors)
                .into_iter()
                .map(|e| Passage {
                    source_url: e.link.unwrap_or_else(|| page.url.to_string()),
                    text: format!("{} {}", e.question, e.answer),
                })
                .collect();
            if !passages.is_empty() {
                return Ok(Some((Stage::PeopleAlsoAsked, passages)));
            }
        }
        attempted.push(Stage::Articles);
        Ok(self.articles_stage(serp, k)?.map(|p| (Stage::Articles, p)))
    }

    fn articles_stage(&self, serp: Option<&SerpPage>, k: usize) -> Result<Option<Vec<Passage>>, RetrievalError> {
        let Some(page) = serp else { return Ok(None) };
        let hits = self.hits_from(page, k)?;
        let passages = self.fetch_articles(&hits);
        Ok((!passages.is_empty()).then_some(passages))
    }
}

fn check_k(k: usize) -> Result<(), RetrievalError> {
    if k == 0 {
        Err(RetrievalError::InvalidArgument("k must be at least 1".into()))
    } else {
        Ok(())
    }
}
