use serde::{Deserialize, Serialize};
use tracing::warn;
use veritas_baselines::{LogRegConfig, LogRegModelF64, SparseVectorF64};
use veritas_core::{BinaryLabel, PipelineKind, ScorerKind};
use veritas_nli::{calibrate_threshold, ConvScorerConfigF64, FACTCC_THRESHOLD};

use crate::error::EvalError;

/// Threshold chosen for one (pipeline, scorer) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEntry {
    pub pipeline: PipelineKind,
    pub scorer: ScorerKind,
    pub threshold: f64,
    /// Accuracy on the calibration split; absent when not calibrated.
    pub calibration_accuracy: Option<f64>,
    pub calibrated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Picks the threshold for `scorer` from calibration-split scores. The
/// consistency classifier keeps its fixed 0.5 boundary; a split that
/// cannot be calibrated (one class, fewer than two scored rows) falls back
/// to `default`.
pub fn choose_threshold(
    pipeline: PipelineKind,
    scorer: ScorerKind,
    scores: &[f64],
    labels: &[BinaryLabel],
    grid_step: f64,
    default: f64,
) -> ThresholdEntry {
    let fixed = |threshold, note: Option<String>| ThresholdEntry {
        pipeline,
        scorer,
        threshold,
        calibration_accuracy: None,
        calibrated: false,
        note,
    };
    if scorer == ScorerKind::FactCc {
        return fixed(FACTCC_THRESHOLD, None);
    }
    match calibrate_threshold(scores, labels, grid_step) {
        Ok(r) => ThresholdEntry {
            pipeline,
            scorer,
            threshold: r.threshold,
            calibration_accuracy: Some(r.accuracy_at_threshold),
            calibrated: true,
            note: None,
        },
        Err(e) => {
            warn!(pipeline = %pipeline, scorer = %scorer, error = %e, "calibration skipped, using default threshold");
            fixed(default, Some(format!("calibration skipped: {e}")))
        }
    }
}

/// Fits the convolution filter by logistic regression on column
/// histograms. The filter uses half the fitted weights and bias, which is
/// the first-order expansion of `2 * sigmoid(z) - 1` and keeps the sign of
/// the logistic decision.
pub fn fit_conv_config(
    histograms: &[Vec<f64>],
    labels: &[BinaryLabel],
    bins: usize,
    config: LogRegConfig,
) -> Result<ConvScorerConfigF64, EvalError> {
    let xs = histograms
        .iter()
        .map(|h| SparseVectorF64::from_dense(h))
        .collect::<Result<Vec<_>, _>>()?;
    let fit = LogRegModelF64::train(&xs, labels, bins, config)?;
    let weights = fit.model.weights().iter().map(|w| w / 2.0).collect();
    Ok(ConvScorerConfigF64::new(bins, weights, fit.model.bias() / 2.0)?)
}
