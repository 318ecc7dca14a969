//! LIAR truthfulness labels and their reduction to a binary verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CoreError;

/// Binary verdict. `Reliable` orders above `Unreliable`, which fixes
/// tie-breaking in reports. Serialized as `"true"` / `"false"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BinaryLabel {
    #[serde(rename = "false")]
    Unreliable,
    #[serde(rename = "true")]
    Reliable,
}

impl BinaryLabel {
    pub const ALL: [BinaryLabel; 2] = [BinaryLabel::Reliable, BinaryLabel::Unreliable];

    pub fn from_bool(reliable: bool) -> Self {
        if reliable {
            BinaryLabel::Reliable
        } else {
            BinaryLabel::Unreliable
        }
    }

    pub fn is_reliable(self) -> bool {
        self == BinaryLabel::Reliable
    }

    /// Report spelling, `"true"` or `"false"`.
    pub fn as_str(self) -> &'static str {
        match self {
            BinaryLabel::Reliable => "true",
            BinaryLabel::Unreliable => "false",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BinaryLabel::Reliable => "Reliable",
            BinaryLabel::Unreliable => "Unreliable",
        }
    }
}

impl fmt::Display for BinaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BinaryLabel {
    type Err = CoreError;

    /// Accepts `true`/`false` in any case, `1`/`0`, and the variant names.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "true" | "1" | "reliable" => Ok(BinaryLabel::Reliable),
            "false" | "0" | "unreliable" => Ok(BinaryLabel::Unreliable),
            _ => Err(CoreError::UnknownBinaryLabel(s.to_string())),
        }
    }
}

/// The six LIAR truthfulness ratings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SixWayLabel {
    True,
    MostlyTrue,
    HalfTrue,
    BarelyTrue,
    False,
    PantsFire,
}

impl SixWayLabel {
    pub const ALL: [SixWayLabel; 6] = [
        SixWayLabel::True,
        SixWayLabel::MostlyTrue,
        SixWayLabel::HalfTrue,
        SixWayLabel::BarelyTrue,
        SixWayLabel::False,
        SixWayLabel::PantsFire,
    ];

    /// Canonical hyphenated spelling used by LIAR files.
    pub fn as_str(self) -> &'static str {
        match self {
            SixWayLabel::True => "true",
            SixWayLabel::MostlyTrue => "mostly-true",
            SixWayLabel::HalfTrue => "half-true",
            SixWayLabel::BarelyTrue => "barely-true",
            SixWayLabel::False => "false",
            SixWayLabel::PantsFire => "pants-fire",
        }
    }

    /// Parses a label, attaching the dataset row to the error.
    pub fn parse_at_row(raw: &str, row: usize) -> Result<Self, CoreError> {
        raw.parse::<Self>().map_err(|_| CoreError::UnknownLabel {
            raw: raw.to_string(),
            row: Some(row),
        })
    }
}

impl fmt::Display for SixWayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SixWayLabel {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .trim()
            .to_lowercase()
            .chars()
            .map(|c| if c == '_' || c.is_whitespace() { '-' } else { c })
            .collect();
        let label = match norm.as_str() {
            "true" => SixWayLabel::True,
            "mostly-true" => SixWayLabel::MostlyTrue,
            "half-true" => SixWayLabel::HalfTrue,
            "barely-true" => SixWayLabel::BarelyTrue,
            "false" => SixWayLabel::False,
            "pants-fire" | "pants-on-fire" => SixWayLabel::PantsFire,
            _ => {
                return Err(CoreError::UnknownLabel {
                    raw: s.to_string(),
                    row: None,
                })
            }
        };
        Ok(label)
    }
}

/// Collapses the six LIAR ratings to a binary verdict: the three "true"
/// grades are reliable, the rest unreliable.
pub fn map_liar_label(raw: SixWayLabel) -> BinaryLabel {
    match raw {
        SixWayLabel::True | SixWayLabel::MostlyTrue | SixWayLabel::HalfTrue => BinaryLabel::Reliable,
        SixWayLabel::BarelyTrue | SixWayLabel::False | SixWayLabel::PantsFire => {
            BinaryLabel::Unreliable
        }
    }
}

impl From<SixWayLabel> for BinaryLabel {
    fn from(raw: SixWayLabel) -> Self {
        map_liar_label(raw)
    }
}
