//! Natural-language-inference scoring of a headline against retrieved
//! evidence.
//!
//! The premise and hypothesis are segmented into sentences, every
//! (premise sentence, hypothesis sentence) pair is classified by an
//! [`NliBackend`], and the resulting [`PairMatrix`] is reduced to a single
//! consistency score, either zero-shot (column maxima, then mean) or through
//! a per-column histogram and a learned linear filter. A document-level
//! consistency classifier ([`factcc_classify`]) and grid-search threshold
//! calibration round out the module.
//!
//! Kernels are generic over [`veritas_core::Scalar`]; the `*F64` aliases
//! below are what the rest of the workspace uses.

pub mod backend;
pub mod calibrate;
pub mod distribution;
pub mod error;
pub mod factcc;
pub mod matrix;
pub mod mock;
pub mod remote;
pub mod sentence;
pub mod summac;
pub mod wire;

pub use backend::{ConsistencyBackend, NliBackend, SentencePair};
pub use calibrate::{calibrate_threshold, threshold_grid, CalibrationResult, DEFAULT_GRID_STEP};
pub use distribution::NliDistribution;
pub use error::{BackendError, CalibrationError, ScoringError};
pub use factcc::{factcc_classify, FACTCC_THRESHOLD};
pub use matrix::{build_pair_matrix, PairMatrix};
pub use remote::SidecarClient;
pub use sentence::SentenceSplitter;
pub use summac::{column_histogram, conv_score_from_histograms, summac_conv_score, summac_zs_score, ConvScorerConfig, DEFAULT_BIN_COUNT};

pub type NliDistributionF64 = NliDistribution<f64>;
pub type NliDistributionF32 = NliDistribution<f32>;
pub type PairMatrixF64 = PairMatrix<f64>;
pub type PairMatrixF32 = PairMatrix<f32>;
pub type ConvScorerConfigF64 = ConvScorerConfig<f64>;
pub type ConvScorerConfigF32 = ConvScorerConfig<f32>;
pub type CalibrationResultF64 = CalibrationResult<f64>;
