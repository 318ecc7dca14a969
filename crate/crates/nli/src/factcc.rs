use veritas_core::{BinaryLabel, Scalar};

use crate::{ConsistencyBackend, ScoringError};

/// Decision boundary on the consistency probability; inclusive.
pub const FACTCC_THRESHOLD: f64 = 0.5;

/// Document-level consistency check. Returns the backend's probability of
/// the consistent class and `Reliable` iff it is at least 0.5.
pub fn factcc_classify<T: Scalar, B: ConsistencyBackend<T> + ?Sized>(
    premise: &str,
    claim: &str,
    backend: &B,
) -> Result<(T, BinaryLabel), ScoringError> {
    if premise.trim().is_empty() {
        return Err(ScoringError::EmptyText("premise"));
    }
    if claim.trim().is_empty() {
        return Err(ScoringError::EmptyText("claim"));
    }
    let score = backend.consistency(premise, claim)?;
    if !score.is_finite() || score < T::zero() || score > T::one() {
        return Err(ScoringError::ContractViolation(format!(
            "consistency score {score} outside [0, 1]"
        )));
    }
    Ok((score, BinaryLabel::from_bool(score >= T::lit(FACTCC_THRESHOLD))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mock::ConstantConsistency;

    #[test]
    fn boundary_is_inclusive() {
        let (s, v) = factcc_classify("doc.", "claim", &ConstantConsistency(0.5f64)).unwrap();
        assert_eq!((s, v), (0.5, BinaryLabel::Reliable));
        let (_, v) = factcc_classify("doc.", "claim", &ConstantConsistency(0.1f64)).unwrap();
        assert_eq!(v, BinaryLabel::Unreliable);
        let (_, v) = factcc_classify("doc.", "claim", &ConstantConsistency(0.4999999f32)).unwrap();
        assert_eq!(v, BinaryLabel::Unreliable);
    }

    #[test]
    fn out_of_range_is_contract_violation() {
        let err = factcc_classify("doc.", "claim", &ConstantConsistency(1.5f64)).unwrap_err();
        assert!(matches!(err, ScoringError::ContractViolation(_)));
    }

    #[test]
    fn empty_inputs() {
        assert!(factcc_classify(" ", "claim", &ConstantConsistency(0.5f64)).is_err());
        assert!(factcc_classify("doc", "", &ConstantConsistency(0.5f64)).is_err());
    }
}
