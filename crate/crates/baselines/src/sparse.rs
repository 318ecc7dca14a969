use serde::{Deserialize, Serialize};
use veritas_core::Scalar;

use crate::error::BaselineError;

/// Sparse feature vector: `(index, weight)` pairs with strictly increasing
/// indices and finite weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "Vec<(usize, T)>", into = "Vec<(usize, T)>")]
pub struct SparseVector<T: Scalar> {
    entries: Vec<(usize, T)>,
}

impl<T: Scalar> Default for SparseVector<T> {
    fn default() -> Self {
        Self { entries: Vec::new() }
    }
}

impl<T: Scalar> SparseVector<T> {
    pub fn new(entries: Vec<(usize, T)>) -> Result<Self, BaselineError> {
        for w in entries.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(BaselineError::UnorderedIndices { prev: w[0].0, next: w[1].0 });
            }
        }
        if let Some(&(i, _)) = entries.iter().find(|(_, v)| !v.is_finite()) {
            return Err(BaselineError::NonFinite(i));
        }
        Ok(Self { entries })
    }

    /// Builds from unordered pairs, summing duplicates.
    pub fn from_unordered(mut pairs: Vec<(usize, T)>) -> Result<Self, BaselineError> {
        pairs.sort_by_key(|p| p.0);
        let mut merged: Vec<(usize, T)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 = last.1 + v,
                _ => merged.push((i, v)),
            }
        }
        Self::new(merged)
    }

    pub fn from_dense(dense: &[T]) -> Result<Self, BaselineError> {
        Self::new(dense.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, *v)).collect())
    }

    pub fn entries(&self) -> &[(usize, T)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.entries.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// One past the largest index, or 0 when empty.
    pub fn min_dim(&self) -> usize {
        self.entries.last().map_or(0, |e| e.0 + 1)
    }

    pub fn get(&self, index: usize) -> T {
        self.entries
            .binary_search_by_key(&index, |e| e.0)
            .map_or(T::zero(), |k| self.entries[k].1)
    }

    /// Dot product with a dense vector. Indices beyond `dense` contribute 0.
    pub fn dot(&self, dense: &[T]) -> T {
        self.entries
            .iter()
            .filter(|(i, _)| *i < dense.len())
            .map(|&(i, v)| v * dense[i])
            .sum()
    }

    pub fn to_dense(&self, dim: usize) -> Vec<T> {
        let mut out = vec![T::zero(); dim];
        for &(i, v) in &self.entries {
            if i < dim {
                out[i] = v;
            }
        }
        out
    }
}

impl<T: Scalar> TryFrom<Vec<(usize, T)>> for SparseVector<T> {
    type Error = BaselineError;

    fn try_from(v: Vec<(usize, T)>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl<T: Scalar> From<SparseVector<T>> for Vec<(usize, T)> {
    fn from(v: SparseVector<T>) -> Self {
        v.entries
    }
}
