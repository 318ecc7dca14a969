//! Decision-threshold calibration by exhaustive grid scan.

use serde::Serialize;
use veritas_core::{BinaryLabel, Scalar};

use crate::CalibrationError;

pub const DEFAULT_GRID_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct CalibrationResult<T: Scalar> {
    pub threshold: T,
    pub accuracy_at_threshold: T,
    pub grid_step: T,
    pub split_seed: u64,
}

impl<T: Scalar> CalibrationResult<T> {
    pub fn with_split_seed(mut self, seed: u64) -> Self {
        self.split_seed = seed;
        self
    }
}

/// Grid points `-1, -1 + step, ..., 1` (the last point is dropped when
/// `2 / step` is not integral). When `1 / step` is an integer `n` the points
/// are computed as `i / n`, the nearest representable value to each decimal
/// grid point, so that a score of exactly `0.94` meets the `0.94` threshold.
pub fn threshold_grid<T: Scalar>(step: T) -> Result<Vec<T>, CalibrationError> {
    if !(step.is_finite() && step > T::zero() && step <= T::lit(2.0)) {
        return Err(CalibrationError::BadGridStep(step.as_f64()));
    }
    let per_unit = T::one() / step;
    let rounded = per_unit.round();
    let tol = T::lit(1e-9) * rounded.max(T::one());
    if (per_unit - rounded).abs() <= tol {
        let n = rounded.to_i64().expect("grid size fits i64");
        Ok((-n..=n).map(|i| T::lit(i as f64) / rounded).collect())
    } else {
        let count = (T::lit(2.0) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
        Ok((0..=count).map(|i| -T::one() + T::from_count(i) * step).collect())
    }
}

/// Picks the grid threshold maximising the accuracy of
/// `score >= t => Reliable`; ties go to the smallest threshold.
///
/// Scores are sorted once and the grid is swept with a single cursor, so
/// the cost is O(n log n + grid).
pub fn calibrate_threshold<T: Scalar>(
    scores: &[T],
    labels: &[BinaryLabel],
    grid_step: T,
) -> Result<CalibrationResult<T>, CalibrationError> {
    if scores.len() != labels.len() {
        return Err(CalibrationError::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if scores.len() < 2 {
        return Err(CalibrationError::TooFew(scores.len()));
    }
    let reliable_total = labels.iter().filter(|l| l.is_reliable()).count();
    if reliable_total == 0 || reliable_total == labels.len() {
        return Err(CalibrationError::SingleClass);
    }
    if let Some(bad) = scores
        .iter()
        .find(|s| !(s.is_finite() && **s >= -T::one() && **s <= T::one()))
    {
        return Err(CalibrationError::ScoreOutOfRange(bad.as_f64()));
    }
    let grid = threshold_grid(grid_step)?;

    let mut sorted: Vec<(T, BinaryLabel)> = scores.iter().copied().zip(labels.iter().copied()).collect();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("scores are finite"));

    // Below the cursor: predicted Unreliable.
    let mut cursor = 0usize;
    let mut unreliable_below = 0usize;
    let mut reliable_below = 0usize;
    let mut best: Option<(usize, T)> = None;
    for &t in &grid {
        while cursor < sorted.len() && sorted[cursor].0 < t {
            if sorted[cursor].1.is_reliable() {
                reliable_below += 1;
            } else {
                unreliable_below += 1;
            }
            cursor += 1;
        }
        let correct = unreliable_below + (reliable_total - reliable_below);
        if best.map_or(true, |(c, _)| correct > c) {
            best = Some((correct, t));
        }
    }
    let (correct, threshold) = best.expect("grid is non-empty");
    Ok(CalibrationResult {
        threshold,
        accuracy_at_threshold: T::from_count(correct) / T::from_count(scores.len()),
        grid_step,
        split_seed: 0,
    })
}
