use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PipelineError;

pub const PLACEHOLDER: &str = "{headline}";

const QUESTION_GEN: &str = include_str!("../data/prompts/question_gen.txt");
const FAKE_HEADLINE_GEN: &str = include_str!("../data/prompts/fake_headline_gen.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptKind {
    QuestionGen,
    FakeHeadlineGen,
}

impl PromptKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PromptKind::QuestionGen => "question_gen",
            PromptKind::FakeHeadlineGen => "fake_headline_gen",
        }
    }
}

impl fmt::Display for PromptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptKind {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "question_gen" => Ok(PromptKind::QuestionGen),
            "fake_headline_gen" => Ok(PromptKind::FakeHeadlineGen),
            other => Err(PipelineError::Template(format!("unknown prompt {other:?}"))),
        }
    }
}

/// Prompt text with exactly one `{headline}` placeholder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    kind: PromptKind,
    text: String,
}

impl PromptTemplate {
    pub fn new(kind: PromptKind, text: impl Into<String>) -> Result<Self, PipelineError> {
        let text = text.into();
        let n = text.matches(PLACEHOLDER).count();
        if n != 1 {
            return Err(PipelineError::Template(format!("{kind} has {n} {PLACEHOLDER} placeholders, expected 1")));
        }
        Ok(Self { kind, text })
    }

    /// The template shipped with the crate.
    pub fn shipped(kind: PromptKind) -> Self {
        let text = match kind {
            PromptKind::QuestionGen => QUESTION_GEN,
            PromptKind::FakeHeadlineGen => FAKE_HEADLINE_GEN,
        };
        Self::new(kind, text).expect("shipped templates are valid")
    }

    pub fn load(kind: PromptKind, path: impl AsRef<std::path::Path>) -> Result<Self, PipelineError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Template(format!("{}: {e}", path.display())))?;
        Self::new(kind, text)
    }

    pub fn kind(&self) -> PromptKind {
        self.kind
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn render(&self, headline: &str) -> String {
        self.text.replacen(PLACEHOLDER, headline.trim(), 1)
    }
}
