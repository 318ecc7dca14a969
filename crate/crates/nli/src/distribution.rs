use serde::{Deserialize, Serialize};
use veritas_core::Scalar;

use crate::ScoringError;

/// Simplex tolerance for the three class likelihoods.
pub const SIMPLEX_TOLERANCE: f64 = 1e-6;

/// Entailment / contradiction / neutral likelihoods for one sentence pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct NliDistribution<T: Scalar> {
    pub entail: T,
    pub contradict: T,
    pub neutral: T,
}

impl<T: Scalar> NliDistribution<T> {
    /// Checked constructor: every component in [0, 1], summing to 1 within
    /// [`SIMPLEX_TOLERANCE`].
    pub fn new(entail: T, contradict: T, neutral: T) -> Result<Self, ScoringError> {
        let d = NliDistribution {
            entail,
            contradict,
            neutral,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), ScoringError> {
        let parts = [self.entail, self.contradict, self.neutral];
        let in_unit = parts
            .iter()
            .all(|p| p.is_finite() && *p >= T::zero() && *p <= T::one());
        let sum = (self.entail + self.contradict + self.neutral).as_f64();
        if in_unit && (sum - 1.0).abs() <= SIMPLEX_TOLERANCE {
            Ok(())
        } else {
            Err(ScoringError::ContractViolation(format!(
                "distribution ({}, {}, {}) is not on the simplex",
                self.entail, self.contradict, self.neutral
            )))
        }
    }

    pub fn neutral_only() -> Self {
        NliDistribution {
            entail: T::zero(),
            contradict: T::zero(),
            neutral: T::one(),
        }
    }

    /// Scalar consistency signal `entail - contradict`, in [-1, 1].
    pub fn signal(&self) -> T {
        self.entail - self.contradict
    }

    pub fn cast<U: Scalar>(&self) -> NliDistribution<U> {
        NliDistribution {
            entail: U::lit(self.entail.as_f64()),
            contradict: U::lit(self.contradict.as_f64()),
            neutral: U::lit(self.neutral.as_f64()),
        }
    }
}
