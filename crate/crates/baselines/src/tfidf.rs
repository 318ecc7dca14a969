use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use veritas_core::Scalar;

use crate::error::BaselineError;
use crate::sparse::SparseVector;

/// Vocabulary, document frequencies and inverse document frequencies fitted
/// on a tokenized corpus.
///
/// `idf(t) = ln(N / df(t))` with no smoothing, and
/// `tf(t, d) = f(t, d) / Σ f(t', d)` where the sum runs over every token of
/// `d`, including tokens outside the vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TfIdfModel<T: Scalar> {
    vocabulary: BTreeMap<String, usize>,
    doc_freq: Vec<usize>,
    doc_count: usize,
    idf: Vec<T>,
}

impl<T: Scalar> TfIdfModel<T> {
    /// Column indices follow the lexicographic order of the tokens.
    pub fn fit<S: AsRef<str>>(corpus: &[Vec<S>]) -> Result<Self, BaselineError> {
        if corpus.iter().all(|d| d.is_empty()) {
            return Err(BaselineError::EmptyCorpus);
        }
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in corpus {
            let distinct: BTreeSet<&str> = doc.iter().map(AsRef::as_ref).collect();
            for t in distinct {
                *df.entry(t).or_default() += 1;
            }
        }
        let doc_count = corpus.len();
        let n = T::from_count(doc_count);
        let mut vocabulary = BTreeMap::new();
        let mut doc_freq = Vec::with_capacity(df.len());
        let mut idf = Vec::with_capacity(df.len());
        for (i, (t, f)) in df.into_iter().enumerate() {
            vocabulary.insert(t.to_string(), i);
            doc_freq.push(f);
            idf.push((n / T::from_count(f)).ln());
        }
        Ok(Self { vocabulary, doc_freq, doc_count, idf })
    }

    pub fn dim(&self) -> usize {
        self.idf.len()
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.vocabulary.get(token).copied()
    }

    pub fn vocabulary(&self) -> &BTreeMap<String, usize> {
        &self.vocabulary
    }

    pub fn doc_freq(&self, token: &str) -> Option<usize> {
        self.index_of(token).map(|i| self.doc_freq[i])
    }

    pub fn idf(&self, token: &str) -> Option<T> {
        self.index_of(token).map(|i| self.idf[i])
    }

    pub fn idf_values(&self) -> &[T] {
        &self.idf
    }

    /// Raw in-vocabulary token counts; the input for naive Bayes.
    pub fn counts<S: AsRef<str>>(&self, doc: &[S]) -> SparseVector<T> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for t in doc {
            if let Some(i) = self.index_of(t.as_ref()) {
                *counts.entry(i).or_default() += 1;
            }
        }
        let pairs = counts.into_iter().map(|(i, c)| (i, T::from_count(c))).collect();
        SparseVector::from_unordered(pairs).expect("counts are finite")
    }

    /// TF-IDF weights of the in-vocabulary tokens of `doc`.
    pub fn transform<S: AsRef<str>>(&self, doc: &[S]) -> SparseVector<T> {
        if doc.is_empty() {
            return SparseVector::default();
        }
        let total = T::from_count(doc.len());
        let counts = self.counts(doc);
        let pairs = counts.iter().map(|(i, c)| (i, c / total * self.idf[i])).collect();
        SparseVector::new(pairs).expect("counts are ordered")
    }

    pub(crate) fn check(&self) -> Result<(), BaselineError> {
        let dim = self.idf.len();
        if self.doc_freq.len() != dim || self.vocabulary.len() != dim {
            return Err(BaselineError::InvalidConfig("vocabulary, doc_freq and idf lengths differ".into()));
        }
        if let Some(&i) = self.vocabulary.values().find(|&&i| i >= dim) {
            return Err(BaselineError::IndexOutOfRange { index: i, dim });
        }
        if self.doc_freq.iter().any(|&f| f == 0 || f > self.doc_count) {
            return Err(BaselineError::InvalidConfig("document frequency outside 1..=N".into()));
        }
        Ok(())
    }
}
