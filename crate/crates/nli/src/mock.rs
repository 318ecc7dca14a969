//! Deterministic in-process backends for hermetic runs.

use std::collections::HashSet;

use sha2::{Digest, Sha256};
use veritas_core::Scalar;

use crate::{BackendError, ConsistencyBackend, NliBackend, NliDistribution, SentencePair};

/// Returns the same distribution for every pair.
#[derive(Debug, Clone, Copy)]
pub struct ConstantNli<T: Scalar>(pub NliDistribution<T>);

impl<T: Scalar> ConstantNli<T> {
    pub fn new(d: NliDistribution<T>) -> Self {
        ConstantNli(d)
    }

    pub fn neutral() -> Self {
        ConstantNli(NliDistribution::neutral_only())
    }

    pub fn entailing() -> Self {
        ConstantNli(NliDistribution {
            entail: T::one(),
            contradict: T::zero(),
            neutral: T::zero(),
        })
    }
}

impl<T: Scalar> NliBackend<T> for ConstantNli<T> {
    fn classify(&self, pairs: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError> {
        Ok(vec![self.0; pairs.len()])
    }
}

/// Distribution derived from a seeded hash of the pair text. Arbitrary but
/// stable; mirrors the sidecar's mock mode.
#[derive(Debug, Clone, Copy, Default)]
pub struct HashNli {
    pub seed: u64,
}

impl HashNli {
    pub fn distribution<T: Scalar>(&self, pair: &SentencePair) -> NliDistribution<T> {
        let digest = Sha256::new()
            .chain_update(self.seed.to_le_bytes())
            .chain_update(pair.premise.as_bytes())
            .chain_update([0x1f])
            .chain_update(pair.hypothesis.as_bytes())
            .finalize();
        let w: Vec<f64> = digest
            .chunks(4)
            .take(3)
            .map(|c| f64::from(u32::from_le_bytes([c[0], c[1], c[2], c[3]])) + 1.0)
            .collect();
        let sum: f64 = w.iter().sum();
        let entail = w[0] / sum;
        let contradict = w[1] / sum;
        NliDistribution {
            entail: T::lit(entail),
            contradict: T::lit(contradict),
            neutral: T::lit(1.0 - entail - contradict),
        }
    }
}

impl<T: Scalar> NliBackend<T> for HashNli {
    fn classify(&self, pairs: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError> {
        Ok(pairs.iter().map(|p| self.distribution(p)).collect())
    }
}

const FUNCTION_WORDS: &[&str] = &[
    "a", "an", "the", "of", "in", "on", "at", "to", "for", "and", "or", "is", "was", "are", "were", "be", "been",
    "by", "with", "as", "its", "it", "this", "that", "from", "has", "have", "had", "s", "his", "her", "their",
];

const NEGATIONS: &[&str] = &["not", "no", "never", "none", "nobody", "neither", "nor", "without"];

struct Bag {
    words: HashSet<String>,
    numbers: HashSet<String>,
    negated: bool,
}

fn bag(text: &str) -> Bag {
    let mut words = HashSet::new();
    let mut numbers = HashSet::new();
    let mut negated = false;
    for raw in text.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '\u{2019}')) {
        let lower = raw.to_lowercase();
        if lower.is_empty() {
            continue;
        }
        if NEGATIONS.contains(&lower.as_str()) || lower.ends_with("n't") || lower.ends_with("n\u{2019}t") {
            negated = true;
            continue;
        }
        let token: String = lower.chars().filter(|c| c.is_alphanumeric()).collect();
        if token.is_empty() || FUNCTION_WORDS.contains(&token.as_str()) {
            continue;
        }
        if token.chars().all(|c| c.is_ascii_digit()) {
            numbers.insert(token.clone());
        }
        words.insert(token);
    }
    Bag {
        words,
        numbers,
        negated,
    }
}

/// Fraction of hypothesis content words found in the premise, and whether
/// the two disagree on numbers or negation.
fn overlap(premise: &str, hypothesis: &str) -> Option<(f64, bool)> {
    let p = bag(premise);
    let h = bag(hypothesis);
    if h.words.is_empty() {
        return None;
    }
    let cov = h.words.iter().filter(|w| p.words.contains(*w)).count() as f64 / h.words.len() as f64;
    let number_clash = !h.numbers.is_empty() && !p.numbers.is_empty() && !h.numbers.is_subset(&p.numbers);
    let negation_clash = cov >= 0.5 && p.negated != h.negated;
    Some((cov, number_clash || negation_clash))
}

/// Word-overlap heuristic standing in for a real NLI model: coverage of
/// the hypothesis by the premise drives entailment, clashing numbers or
/// negation drive contradiction.
#[derive(Debug, Clone, Copy, Default)]
pub struct LexicalNli;

impl LexicalNli {
    pub fn distribution<T: Scalar>(&self, pair: &SentencePair) -> NliDistribution<T> {
        let (entail, contradict) = match overlap(&pair.premise, &pair.hypothesis) {
            None => (0.0, 0.0),
            Some((cov, true)) => (0.05, 0.5 + 0.4 * cov),
            Some((cov, false)) => (0.9 * cov, 0.05 * (1.0 - cov)),
        };
        NliDistribution {
            entail: T::lit(entail),
            contradict: T::lit(contradict),
            neutral: T::lit(1.0 - entail - contradict),
        }
    }
}

impl<T: Scalar> NliBackend<T> for LexicalNli {
    fn classify(&self, pairs: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError> {
        Ok(pairs.iter().map(|p| self.distribution(p)).collect())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantConsistency<T: Scalar>(pub T);

impl<T: Scalar> ConsistencyBackend<T> for ConstantConsistency<T> {
    fn consistency(&self, _document: &str, _claim: &str) -> Result<T, BackendError> {
        Ok(self.0)
    }
}

/// Document-level counterpart of [`LexicalNli`].
#[derive(Debug, Clone, Copy, Default)]
pub struct LexicalConsistency;

impl<T: Scalar> ConsistencyBackend<T> for LexicalConsistency {
    fn consistency(&self, document: &str, claim: &str) -> Result<T, BackendError> {
        let score = match overlap(document, claim) {
            None => 0.0,
            Some((cov, true)) => 0.1 + 0.2 * cov,
            Some((cov, false)) => 0.05 + 0.9 * cov,
        };
        Ok(T::lit(score))
    }
}

/// Fails every call; exercises retry and degradation paths.
#[derive(Debug, Clone, Default)]
pub struct FailingBackend {
    pub message: String,
}

impl<T: Scalar> NliBackend<T> for FailingBackend {
    fn classify(&self, _: &[SentencePair]) -> Result<Vec<NliDistribution<T>>, BackendError> {
        Err(BackendError::Unavailable(self.message.clone()))
    }
}

impl<T: Scalar> ConsistencyBackend<T> for FailingBackend {
    fn consistency(&self, _: &str, _: &str) -> Result<T, BackendError> {
        Err(BackendError::Unavailable(self.message.clone()))
    }
}
