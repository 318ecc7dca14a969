use serde::{Deserialize, Serialize};

use crate::label::{map_liar_label, BinaryLabel, SixWayLabel};
use crate::CoreError;

/// A headline or statement under verification, with its ground truth
/// when known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<BinaryLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_label: Option<SixWayLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_tag: Option<String>,
}

impl ClaimRecord {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Result<Self, CoreError> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(CoreError::Empty { what: "claim text" });
        }
        Ok(ClaimRecord {
            id: id.into(),
            text,
            label: None,
            raw_label: None,
            source: None,
            domain_tag: None,
        })
    }

    pub fn with_label(mut self, label: BinaryLabel) -> Result<Self, CoreError> {
        if let Some(raw) = self.raw_label {
            if map_liar_label(raw) != label {
                return Err(CoreError::LabelMismatch {
                    label: label.to_string(),
                    raw: raw.to_string(),
                });
            }
        }
        self.label = Some(label);
        Ok(self)
    }

    /// Sets the six-way label and the binary label it maps to.
    pub fn with_raw_label(mut self, raw: SixWayLabel) -> Self {
        self.raw_label = Some(raw);
        self.label = Some(map_liar_label(raw));
        self
    }

    pub fn with_source(mut self, source: Option<String>) -> Self {
        self.source = source.filter(|s| !s.trim().is_empty());
        self
    }

    pub fn with_domain_tag(mut self, tag: Option<String>) -> Self {
        self.domain_tag = tag.filter(|s| !s.trim().is_empty());
        self
    }
}
