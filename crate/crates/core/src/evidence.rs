use std::fmt;

use serde::{Deserialize, Serialize};

use crate::CoreError;

/// Retrieval stage that produced a bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    QuickAnswer,
    PeopleAlsoAsked,
    Articles,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::QuickAnswer => "quick_answer",
            Stage::PeopleAlsoAsked => "people_also_asked",
            Stage::Articles => "articles",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub source_url: String,
    pub text: String,
}

/// Premise text retrieved for a query, tagged with the stage that found it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceBundle {
    query: String,
    stage: Stage,
    passages: Vec<Passage>,
    scrape_seconds: f64,
}

impl EvidenceBundle {
    pub fn new(
        query: impl Into<String>,
        stage: Stage,
        passages: Vec<Passage>,
        scrape_seconds: f64,
    ) -> Result<Self, CoreError> {
        if passages.is_empty() {
            return Err(CoreError::Empty { what: "evidence passages" });
        }
        if passages.iter().any(|p| p.text.trim().is_empty()) {
            return Err(CoreError::Empty { what: "passage text" });
        }
        if stage == Stage::QuickAnswer && passages.len() != 1 {
            return Err(CoreError::QuickAnswerPassages(passages.len()));
        }
        check_duration("scrape_seconds", scrape_seconds)?;
        Ok(EvidenceBundle {
            query: query.into(),
            stage,
            passages,
            scrape_seconds,
        })
    }

    pub fn query(&self) -> &str {
        &self.query
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn scrape_seconds(&self) -> f64 {
        self.scrape_seconds
    }

    pub fn with_scrape_seconds(mut self, secs: f64) -> Result<Self, CoreError> {
        check_duration("scrape_seconds", secs)?;
        self.scrape_seconds = secs;
        Ok(self)
    }

    /// Distinct source URLs in passage order.
    pub fn source_urls(&self) -> Vec<String> {
        let mut urls: Vec<String> = Vec::new();
        for p in &self.passages {
            if !urls.contains(&p.source_url) {
                urls.push(p.source_url.clone());
            }
        }
        urls
    }
}

pub(crate) fn check_duration(what: &'static str, value: f64) -> Result<(), CoreError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(CoreError::NegativeDuration { what, value })
    }
}
