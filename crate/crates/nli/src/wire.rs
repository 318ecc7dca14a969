//! JSON bodies exchanged with the inference sidecar.
//!
//! | endpoint               | request                | response               |
//! |------------------------|------------------------|------------------------|
//! | `POST /v1/nli/batch`   | [`NliBatchRequest`]    | [`NliBatchResponse`]   |
//! | `POST /v1/consistency` | [`ConsistencyRequest`] | [`ConsistencyResponse`]|
//! | `POST /v1/slm/generate`| [`SlmRequest`]         | [`SlmResponse`]        |
//! | `GET /healthz`         |                        | [`HealthResponse`]     |

use serde::{Deserialize, Serialize};

use crate::{NliDistribution, SentencePair};

pub const NLI_BATCH_PATH: &str = "/v1/nli/batch";
pub const CONSISTENCY_PATH: &str = "/v1/consistency";
pub const SLM_GENERATE_PATH: &str = "/v1/slm/generate";
pub const HEALTH_PATH: &str = "/healthz";

/// Largest batch the sidecar accepts; bigger requests get a 413.
pub const MAX_NLI_BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NliBatchRequest {
    pub pairs: Vec<SentencePair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NliBatchResponse {
    pub distributions: Vec<NliDistribution<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRequest {
    pub document: String,
    pub claim: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyResponse {
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlmTask {
    Question,
    FakeHeadline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlmRequest {
    pub task: SlmTask,
    pub model: String,
    pub headline: String,
    /// Fully rendered prompt; the sidecar renders the same template itself
    /// and may use this field to check agreement.
    pub prompt: String,
    pub temperature: f64,
    pub max_new_tokens: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlmResponse {
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HealthResponse {
    pub ready: bool,
    #[serde(default)]
    pub mock: bool,
}
