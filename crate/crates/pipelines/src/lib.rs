//! Headline verification pipelines.
//!
//! Each pipeline turns a headline into a search query (the headline itself,
//! or a question written by a small language model), retrieves evidence,
//! assembles a premise and scores the headline against it. The result is a
//! [`VerdictRecord`](veritas_core::VerdictRecord) plus an
//! [`ExplanationRecord`](veritas_core::ExplanationRecord) that carries the
//! exact premise and its sources.

pub mod cache;
pub mod error;
pub mod generate;
pub mod pipeline;
pub mod premise;
pub mod prompt;
pub mod scoring;
pub mod slm;

pub use cache::EvidenceCache;
pub use error::PipelineError;
pub use generate::{
    extract_headline, extract_question, generate_fake_headline, generate_fake_headline_with, generate_question,
    generate_question_with,
};
pub use pipeline::{slm_kind, strategy, GatheredEvidence, PipelineConfig, PipelineDeps, PipelineOutput};
pub use premise::{assemble_premise, DEFAULT_PREMISE_CAP};
pub use prompt::{PromptKind, PromptTemplate, PLACEHOLDER};
pub use scoring::{Scorers, Thresholds};
pub use slm::{EchoSlm, HttpSlm, MockSlm, ScriptedSlm, SlmBackend, SlmKind, SLM_MAX_NEW_TOKENS, SLM_TEMPERATURE};

pub type ScorersF64 = Scorers<f64>;
pub type ScorersF32 = Scorers<f32>;
pub type PipelineDepsF64 = PipelineDeps<f64>;
pub type PipelineDepsF32 = PipelineDeps<f32>;
