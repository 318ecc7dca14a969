use std::sync::Arc;

use serde::{Deserialize, Serialize};
use url::Url;

use crate::error::RetrievalError;
use crate::fixtures::FixtureStore;

pub const DEFAULT_SEARCH_BASE: &str = "https://www.google.com/search";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchHit {
    /// 1-based, contiguous within a result set.
    pub rank: usize,
    pub url: String,
    pub title: String,
}

/// A fetched or replayed search result page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SerpPage {
    pub url: Url,
    pub body: String,
}

/// Where search result pages come from.
#[derive(Debug, Clone)]
pub enum SearchProvider {
    /// Fetch `base?q=<query>` through the polite client.
    Live { base_url: Url },
    /// Replay SERPs recorded in a fixture store; `base_url` only shapes the
    /// reported page URL.
    Fixture { store: Arc<FixtureStore>, base_url: Url },
}

impl SearchProvider {
    pub fn live(base_url: &str) -> Result<Self, RetrievalError> {
        Ok(SearchProvider::Live { base_url: parse_base(base_url)? })
    }

    pub fn fixture(store: Arc<FixtureStore>) -> Self {
        let base_url = Url::parse(DEFAULT_SEARCH_BASE).expect("default search base parses");
        SearchProvider::Fixture { store, base_url }
    }

    pub fn base_url(&self) -> &Url {
        match self {
            SearchProvider::Live { base_url } | SearchProvider::Fixture { base_url, .. } => base_url,
        }
    }

    pub fn fixture_store(&self) -> Option<&Arc<FixtureStore>> {
        match self {
            SearchProvider::Fixture { store, .. } => Some(store),
            SearchProvider::Live { .. } => None,
        }
    }
}

fn parse_base(base: &str) -> Result<Url, RetrievalError> {
    let url = Url::parse(base).map_err(|e| RetrievalError::InvalidUrl { url: base.into(), reason: e.to_string() })?;
    if !matches!(url.scheme(), "http" | "https") {
        return Err(RetrievalError::InvalidUrl { url: base.into(), reason: "search base must be http(s)".into() });
    }
    Ok(url)
}

/// `base` with its query replaced by `q=<query>` (whitespace collapsed).
pub fn search_url(base: &Url, query: &str) -> Url {
    let mut url = base.clone();
    let q = query.split_whitespace().collect::<Vec<_>>().join(" ");
    url.query_pairs_mut().clear().append_pair("q", &q);
    url
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_search_urls() {
        let base = Url::parse("https://www.google.com/search?hl=en").unwrap();
        let u = search_url(&base, " Max  Verstappen wins? ");
        assert_eq!(u.as_str(), "https://www.google.com/search?q=Max+Verstappen+wins%3F");
    }

    #[test]
    fn live_base_must_be_http() {
        assert!(SearchProvider::live("ftp://x/search").is_err());
        assert!(SearchProvider::live("not a url").is_err());
        assert!(SearchProvider::live("http://127.0.0.1:8080/search").is_ok());
    }
}
