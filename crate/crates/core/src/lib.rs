//! Domain types shared by every stage of headline verification: claim
//! records, the LIAR label alphabet and its binary reduction, evidence
//! bundles, and the verdict/explanation records a pipeline emits.
//!
//! Numeric kernels in the sibling crates are generic over [`Scalar`]; the
//! records in this crate carry `f64` scores since they are serialized as-is.

pub mod claim;
pub mod error;
pub mod evidence;
pub mod label;
pub mod scalar;
pub mod text;
pub mod verdict;

pub use claim::ClaimRecord;
pub use error::CoreError;
pub use evidence::{EvidenceBundle, Passage, Stage};
pub use label::{map_liar_label, BinaryLabel, SixWayLabel};
pub use scalar::Scalar;
pub use verdict::{ExplanationRecord, PipelineKind, ScorerKind, StageTimings, VerdictRecord};

/// Score type used by serialized records.
pub type Score = f64;
