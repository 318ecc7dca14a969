//! Evidence retrieval for headline verification.
//!
//! A [`Retriever`] fetches a search result page (live or replayed from a
//! [`FixtureStore`]), then extracts evidence in one of two ways: the
//! quick-answer chain (answer box, then people-also-asked, then top-K
//! articles) or top-K articles directly. All fetching goes through a
//! [`PoliteClient`], which consults robots.txt before every request and
//! serializes requests per host.

pub mod error;
pub mod extract;
pub mod fixtures;
pub mod polite;
pub mod retrieve;
pub mod robots;
pub mod search;
pub mod selectors;
pub mod transport;

pub use error::RetrievalError;
pub use extract::{
    extract_article, extract_people_also_asked, extract_quick_answer, extract_result_links, ArticleText, PaaEntry,
    ResultLink,
};
pub use fixtures::{fixture_key, normalize_query, FixtureStore, PageFixture};
pub use polite::{PoliteClient, DEFAULT_MIN_DELAY};
pub use retrieve::{Retriever, Strategy, DEFAULT_TOP_K, DEFAULT_WORKERS};
pub use robots::{product_token, RobotsGroup, RobotsPolicy, RobotsRule};
pub use search::{search_url, SearchHit, SearchProvider, SerpPage, DEFAULT_SEARCH_BASE};
pub use selectors::Selectors;
pub use transport::{
    FetchResponse, FixtureTransport, HttpTransport, OfflineTransport, RecordingTransport, Transport,
    DEFAULT_FETCH_TIMEOUT, DEFAULT_USER_AGENT,
};
