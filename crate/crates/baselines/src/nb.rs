use serde::{Deserialize, Serialize};
use veritas_core::{BinaryLabel, Scalar};

use crate::error::BaselineError;
use crate::sparse::SparseVector;

pub const DEFAULT_ALPHA: f64 = 1.0;

/// Relative gap below which the two class log-posteriors count as tied.
const TIE_EPSILON: f64 = 1e-12;

/// Multinomial naive Bayes over raw token counts with additive smoothing.
///
/// Per-class arrays are indexed `[Unreliable, Reliable]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct NbModel<T: Scalar> {
    alpha: T,
    class_log_priors: [T; 2],
    token_log_likelihoods: [Vec<T>; 2],
}

fn slot(label: BinaryLabel) -> usize {
    match label {
        BinaryLabel::Unreliable => 0,
        BinaryLabel::Reliable => 1,
    }
}

impl<T: Scalar> NbModel<T> {
    pub fn train(counts: &[SparseVector<T>], labels: &[BinaryLabel], dim: usize, alpha: T) -> Result<Self, BaselineError> {
        if counts.len() != labels.len() {
            return Err(BaselineError::LengthMismatch { vectors: counts.len(), labels: labels.len() });
        }
        if !(alpha > T::zero()) || !alpha.is_finite() {
            return Err(BaselineError::InvalidConfig(format!("smoothing alpha must be positive, got {alpha}")));
        }
        let mut docs = [0usize; 2];
        let mut token_counts = [vec![T::zero(); dim], vec![T::zero(); dim]];
        for (v, &y) in counts.iter().zip(labels) {
            let c = slot(y);
            docs[c] += 1;
            for (i, n) in v.iter() {
                if i >= dim {
                    return Err(BaselineError::IndexOutOfRange { index: i, dim });
                }
                if n < T::zero() {
                    return Err(BaselineError::InvalidConfig(format!("negative count {n} at index {i}")));
                }
                token_counts[c][i] = token_counts[c][i] + n;
            }
        }
        if docs[0] == 0 || docs[1] == 0 {
            return Err(BaselineError::SingleClass);
        }
        let total = T::from_count(counts.len());
        let class_log_priors = [
            (T::from_count(docs[0]) / total).ln(),
            (T::from_count(docs[1]) / total).ln(),
        ];
        let smoothed = |tc: &[T]| -> Vec<T> {
            let denom = tc.iter().copied().sum::<T>() + alpha * T::from_count(dim);
            tc.iter().map(|&n| ((n + alpha) / denom).ln()).collect()
        };
        let token_log_likelihoods = [smoothed(&token_counts[0]), smoothed(&token_counts[1])];
        Ok(Self { alpha, class_log_priors, token_log_likelihoods })
    }

    pub fn dim(&self) -> usize {
        self.token_log_likelihoods[0].len()
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn class_log_prior(&self, label: BinaryLabel) -> T {
        self.class_log_priors[slot(label)]
    }

    pub fn token_log_likelihood(&self, label: BinaryLabel, index: usize) -> T {
        self.token_log_likelihoods[slot(label)][index]
    }

    /// Unnormalized log-posterior `ln P(c) + Σ n_t ln P(t | c)`. Indices
    /// beyond the vocabulary are ignored.
    pub fn joint_log_likelihood(&self, counts: &SparseVector<T>, label: BinaryLabel) -> T {
        let c = slot(label);
        self.class_log_priors[c] + counts.dot(&self.token_log_likelihoods[c])
    }

    /// Posterior probability of [`BinaryLabel::Reliable`].
    pub fn posterior_reliable(&self, counts: &SparseVector<T>) -> T {
        let u = self.joint_log_likelihood(counts, BinaryLabel::Unreliable);
        let r = self.joint_log_likelihood(counts, BinaryLabel::Reliable);
        T::one() / (T::one() + (u - r).exp())
    }

    /// Argmax of the class log-posterior; ties go to Unreliable.
    pub fn predict(&self, counts: &SparseVector<T>) -> BinaryLabel {
        let u = self.joint_log_likelihood(counts, BinaryLabel::Unreliable);
        let r = self.joint_log_likelihood(counts, BinaryLabel::Reliable);
        let scale = T::one().max(u.abs()).max(r.abs());
        if r - u > T::lit(TIE_EPSILON) * scale {
            BinaryLabel::Reliable
        } else {
            BinaryLabel::Unreliable
        }
    }

    pub(crate) fn check(&self, dim: usize) -> Result<(), BaselineError> {
        if self.token_log_likelihoods.iter().any(|v| v.len() != dim) {
            return Err(BaselineError::InvalidConfig("naive Bayes table does not match the vocabulary".into()));
        }
        Ok(())
    }
}
