//! Pair-matrix reductions: zero-shot column-max/mean and the binned
//! convolution variant.

use std::path::Path;

use serde::{Deserialize, Serialize};
use veritas_core::Scalar;

use crate::{PairMatrix, ScoringError};

pub const DEFAULT_BIN_COUNT: usize = 50;

/// Zero-shot reduction: for each hypothesis sentence take the strongest
/// premise signal, then average over hypothesis sentences.
pub fn summac_zs_score<T: Scalar>(matrix: &PairMatrix<T>) -> T {
    let n = matrix.cols();
    let total: T = (0..n)
        .map(|j| {
            matrix
                .column_signals(j)
                .fold(T::neg_infinity(), |acc, s| if s > acc { s } else { acc })
        })
        .sum();
    total / T::from_count(n)
}

/// Linear filter applied to each column's signal histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ConvScorerConfig<T: Scalar> {
    #[serde(alias = "binCount")]
    bin_count: usize,
    weights: Vec<T>,
    bias: T,
}

impl<T: Scalar> ConvScorerConfig<T> {
    pub fn new(bin_count: usize, weights: Vec<T>, bias: T) -> Result<Self, ScoringError> {
        let cfg = ConvScorerConfig {
            bin_count,
            weights,
            bias,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ScoringError> {
        if self.bin_count == 0 {
            return Err(ScoringError::InvalidConfig("bin_count must be positive".into()));
        }
        if self.weights.len() != self.bin_count {
            return Err(ScoringError::InvalidConfig(format!(
                "{} weights for {} bins",
                self.weights.len(),
                self.bin_count
            )));
        }
        if !self.bias.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(ScoringError::InvalidConfig("weights and bias must be finite".into()));
        }
        Ok(())
    }

    /// Weights equal to the bin centres, bias zero: the filter output is the
    /// column's mean signal up to binning error. Used when no trained
    /// weights are supplied.
    pub fn centre_ramp(bin_count: usize) -> Result<Self, ScoringError> {
        let b = T::from_count(bin_count);
        let two = T::lit(2.0);
        let weights = (0..bin_count)
            .map(|i| -T::one() + two * (T::from_count(i) + T::lit(0.5)) / b)
            .collect();
        ConvScorerConfig::new(bin_count, weights, T::zero())
    }

    pub fn uniform(bin_count: usize) -> Result<Self, ScoringError> {
        let w = T::one() / T::from_count(bin_count.max(1));
        ConvScorerConfig::new(bin_count, vec![w; bin_count], T::zero())
    }

    pub fn one_hot(bin_count: usize, bin: usize) -> Result<Self, ScoringError> {
        let mut weights = vec![T::zero(); bin_count];
        if let Some(w) = weights.get_mut(bin) {
            *w = T::one();
        }
        ConvScorerConfig::new(bin_count, weights, T::zero())
    }

    pub fn bin_count(&self) -> usize {
        self.bin_count
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn from_json(text: &str) -> Result<Self, ScoringError> {
        let cfg: ConvScorerConfig<T> =
            serde_json::from_str(text).map_err(|e| ScoringError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ScoringError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScoringError::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Filter output for one column histogram, clamped to [-1, 1].
    pub fn apply(&self, hist: &[T]) -> T {
        let raw = hist
            .iter()
            .zip(&self.weights)
            .fold(self.bias, |acc, (h, w)| acc + *h * *w);
        raw.max(-T::one()).min(T::one())
    }

    /// Bin holding `signal` when [-1, 1] is cut into `bin_count` equal
    /// half-open bins; 1.0 lands in the last bin.
    pub fn bin_of(&self, signal: T) -> usize {
        bin_index(signal, self.bin_count)
    }
}

pub(crate) fn bin_index<T: Scalar>(signal: T, bins: usize) -> usize {
    let pos = (signal + T::one()) / T::lit(2.0) * T::from_count(bins);
    let idx = pos.floor().to_usize().unwrap_or(0);
    idx.min(bins - 1)
}

/// Histogram of one column's signals over [-1, 1], normalised by the number
/// of premise sentences so the masses sum to 1.
pub fn column_histogram<T: Scalar>(matrix: &PairMatrix<T>, col: usize, bins: usize) -> Vec<T> {
    let mut hist = vec![T::zero(); bins];
    let mass = T::one() / T::from_count(matrix.rows());
    for s in matrix.column_signals(col) {
        hist[bin_index(s, bins)] = hist[bin_index(s, bins)] + mass;
    }
    hist
}

/// Convolution reduction: each column histogram is mapped through the
/// filter and clamped to [-1, 1]; the score is the mean over columns.
pub fn summac_conv_score<T: Scalar>(matrix: &PairMatrix<T>, config: &ConvScorerConfig<T>) -> T {
    let hists: Vec<Vec<T>> = (0..matrix.cols())
        .map(|j| column_histogram(matrix, j, config.bin_count))
        .collect();
    conv_score_from_histograms(&hists, config)
}

/// Same reduction starting from precomputed column histograms.
pub fn conv_score_from_histograms<T: Scalar>(hists: &[Vec<T>], config: &ConvScorerConfig<T>) -> T {
    let total: T = hists.iter().map(|h| config.apply(h)).sum();
    total / T::from_count(hists.len())
}
