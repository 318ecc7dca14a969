use std::path::Path;

use scraper::Selector;
use serde::Deserialize;

use crate::error::RetrievalError;

const SHIPPED: &str = include_str!("../data/selectors.toml");
const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
struct RawConfig {
    version: u32,
    serp: RawSerp,
    article: RawArticle,
}

#[derive(Debug, Clone, Deserialize)]
struct RawSerp {
    quick_answer: Vec<String>,
    paa_item: Vec<String>,
    paa_question: Vec<String>,
    paa_answer: Vec<String>,
    paa_link: Vec<String>,
    result: Vec<String>,
    result_link: Vec<String>,
    result_title: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawArticle {
    headings: String,
    paragraphs: String,
    exclude: Vec<String>,
    min_paragraph_tokens: usize,
}

/// Ordered alternatives; the first selector with a match is used.
#[derive(Debug, Clone)]
pub struct SelectorList(Vec<Selector>);

impl SelectorList {
    fn parse(field: &str, raw: &[String]) -> Result<Self, RetrievalError> {
        if raw.is_empty() {
            return Err(RetrievalError::Selectors(format!("{field}: empty selector list")));
        }
        raw.iter()
            .map(|s| parse_one(field, s))
            .collect::<Result<Vec<_>, _>>()
            .map(SelectorList)
    }

    pub fn selectors(&self) -> &[Selector] {
        &self.0
    }
}

fn parse_one(field: &str, s: &str) -> Result<Selector, RetrievalError> {
    Selector::parse(s).map_err(|e| RetrievalError::Selectors(format!("{field}: bad selector {s:?}: {e}")))
}

/// Compiled selector configuration.
#[derive(Debug, Clone)]
pub struct Selectors {
    pub quick_answer: SelectorList,
    pub paa_item: SelectorList,
    pub paa_question: SelectorList,
    pub paa_answer: SelectorList,
    pub paa_link: SelectorList,
    pub result: SelectorList,
    pub result_link: SelectorList,
    pub result_title: SelectorList,
    pub headings: Selector,
    pub paragraphs: Selector,
    pub exclude: Vec<String>,
    pub min_paragraph_tokens: usize,
}

impl Default for Selectors {
    fn default() -> Self {
        Self::from_toml(SHIPPED).expect("shipped selector config is valid")
    }
}

impl Selectors {
    pub fn from_toml(src: &str) -> Result<Self, RetrievalError> {
        let raw: RawConfig = toml::from_str(src).map_err(|e| RetrievalError::Selectors(e.to_string()))?;
        if raw.version != SUPPORTED_VERSION {
            return Err(RetrievalError::Selectors(format!("unsupported version {}", raw.version)));
        }
        let s = raw.serp;
        let a = raw.article;
        Ok(Self {
            quick_answer: SelectorList::parse("serp.quick_answer", &s.quick_answer)?,
            paa_item: SelectorList::parse("serp.paa_item", &s.paa_item)?,
            paa_question: SelectorList::parse("serp.paa_question", &s.paa_question)?,
            paa_answer: SelectorList::parse("serp.paa_answer", &s.paa_answer)?,
            paa_link: SelectorList::parse("serp.paa_link", &s.paa_link)?,
            result: SelectorList::parse("serp.result", &s.result)?,
            result_link: SelectorList::parse("serp.result_link", &s.result_link)?,
            result_title: SelectorList::parse("serp.result_title", &s.result_title)?,
            headings: parse_one("article.headings", &a.headings)?,
            paragraphs: parse_one("article.paragraphs", &a.paragraphs)?,
            exclude: a.exclude.into_iter().map(|t| t.to_ascii_lowercase()).collect(),
            min_paragraph_tokens: a.min_paragraph_tokens,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RetrievalError> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path)
            .map_err(|e| RetrievalError::Selectors(format!("{}: {e}", path.display())))?;
        Self::from_toml(&src)
    }

    pub fn with_min_paragraph_tokens(mut self, n: usize) -> Self {
        self.min_paragraph_tokens = n;
        self
    }
}
