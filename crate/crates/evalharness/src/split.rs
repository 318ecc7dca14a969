use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use veritas_core::BinaryLabel;

use crate::error::EvalError;

pub const DEFAULT_SPLIT_SEED: u64 = 42;
pub const DEFAULT_CALIBRATION_FRACTION: f64 = 0.2;
pub const DEFAULT_TRAIN_FRACTION: f64 = 0.7;

/// Index partition of a dataset. Both sides are sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Split {
    pub fraction: f64,
    pub seed: u64,
    /// The `fraction` side: calibration or training rows.
    pub selected: Vec<usize>,
    /// The remainder: reporting or test rows.
    pub rest: Vec<usize>,
}

/// Stratified seeded split: each class contributes `round(fraction * n)`
/// rows to the selected side, kept within `1..n` when the class has at
/// least two rows.
pub fn stratified_split(labels: &[BinaryLabel], fraction: f64, seed: u64) -> Result<Split, EvalError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(EvalError::Split(format!("fraction {fraction} outside (0, 1)")));
    }
    if labels.is_empty() {
        return Err(EvalError::Empty("split input".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected = Vec::new();
    let mut rest = Vec::new();
    for class in [BinaryLabel::Reliable, BinaryLabel::Unreliable] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        let n = idx.len();
        let mut take = (fraction * n as f64).round() as usize;
        if n >= 2 {
            take = take.clamp(1, n - 1);
        }
        idx.shuffle(&mut rng);
        selected.extend_from_slice(&idx[..take]);
        rest.extend_from_slice(&idx[take..]);
    }
    selected.sort_unstable();
    rest.sort_unstable();
    Ok(Split { fraction, seed, selected, rest })
}

/// Fails if any id appears on both sides.
pub fn check_leakage<S: AsRef<str>>(selected: &[S], rest: &[S]) -> Result<(), EvalError> {
    let left: HashSet<&str> = selected.iter().map(AsRef::as_ref).collect();
    let mut shared: Vec<String> = rest.iter().map(AsRef::as_ref).filter(|id| left.contains(id)).map(String::from).collect();
    if shared.is_empty() {
        Ok(())
    } else {
        shared.sort();
        Err(EvalError::Leakage(shared))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use BinaryLabel::{Reliable as R, Unreliable as U};

    #[test]
    fn half_split_of_twenty() {
        let labels: Vec<_> = (0..20).map(|i| if i % 2 == 0 { R } else { U }).collect();
        let s = stratified_split(&labels, 0.5, 42).unwrap();
        assert_eq!((s.selected.len(), s.rest.len()), (10, 10));
        assert_eq!(s.selected.iter().filter(|&&i| labels[i] == R).count(), 5);
    }

    #[test]
    fn seed_changes_ids() {
        let labels = vec![R; 50].into_iter().chain(vec![U; 50]).collect::<Vec<_>>();
        let a = stratified_split(&labels, 0.2, 42).unwrap();
        let b = stratified_split(&labels, 0.2, 43).unwrap();
        assert_eq!(a, stratified_split(&labels, 0.2, 42).unwrap());
        assert_ne!(a.selected, b.selected);
        assert_eq!(a.selected.len(), b.selected.len());
    }

    #[test]
    fn bad_fraction() {
        assert!(stratified_split(&[R, U], 0.0, 1).is_err());
        assert!(stratified_split(&[R, U], 1.0, 1).is_err());
    }

    #[test]
    fn leakage_detected() {
        assert!(check_leakage(&["a", "b"], &["c"]).is_ok());
        assert!(matches!(check_leakage(&["a", "b"], &["b", "c"]), Err(EvalError::Leakage(v)) if v == ["b"]));
    }

    proptest! {
        #[test]
        fn partition_is_disjoint_cover_and_stratified(
            labels in prop::collection::vec(prop::bool::ANY.prop_map(BinaryLabel::from_bool), 1..200),
            fraction in 0.05f64..0.95,
            seed in any::<u64>(),
        ) {
            let s = stratified_split(&labels, fraction, seed).unwrap();
            let mut all: Vec<usize> = s.selected.iter().chain(&s.rest).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
            for class in [R, U] {
                let n = labels.iter().filter(|&&l| l == class).count();
                let k = s.selected.iter().filter(|&&i| labels[i] == class).count();
                prop_assert!((k as f64 - fraction * n as f64).abs() <= 1.0);
            }
            let sel: Vec<String> = s.selected.iter().map(|i| i.to_string()).collect();
            let rest: Vec<String> = s.rest.iter().map(|i| i.to_string()).collect();
            prop_assert!(check_leakage(&sel, &rest).is_ok());
        }
    }
}
