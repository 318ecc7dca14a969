use serde::Serialize;
use veritas_core::Scalar;

use crate::{NliBackend, NliDistribution, ScoringError, SentencePair, SentenceSplitter};

/// M x N grid of NLI distributions: rows are premise sentences, columns are
/// hypothesis sentences. Stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct PairMatrix<T: Scalar> {
    premise_sentences: Vec<String>,
    hypothesis_sentences: Vec<String>,
    cells: Vec<NliDistribution<T>>,
}

impl<T: Scalar> PairMatrix<T> {
    pub fn new(
        premise_sentences: Vec<String>,
        hypothesis_sentences: Vec<String>,
        cells: Vec<NliDistribution<T>>,
    ) -> Result<Self, ScoringError> {
        let (m, n) = (premise_sentences.len(), hypothesis_sentences.len());
        if m == 0 || n == 0 {
            return Err(ScoringError::InvalidMatrix(format!("dimensions {m}x{n} must be at least 1x1")));
        }
        if cells.len() != m * n {
            return Err(ScoringError::InvalidMatrix(format!(
                "{} cells for a {m}x{n} grid",
                cells.len()
            )));
        }
        for c in &cells {
            c.validate()?;
        }
        Ok(PairMatrix {
            premise_sentences,
            hypothesis_sentences,
            cells,
        })
    }

    /// Matrix with placeholder sentence labels, handy for synthetic grids.
    pub fn from_rows(rows: Vec<Vec<NliDistribution<T>>>) -> Result<Self, ScoringError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(ScoringError::InvalidMatrix("ragged rows".into()));
        }
        PairMatrix::new(
            (0..m).map(|i| format!("p{i}")).collect(),
            (0..n).map(|j| format!("h{j}")).collect(),
            rows.into_iter().flatten().collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.premise_sentences.len()
    }

    pub fn cols(&self) -> usize {
        self.hypothesis_sentences.len()
    }

    pub fn premise_sentences(&self) -> &[String] {
        &self.premise_sentences
    }

    pub fn hypothesis_sentences(&self) -> &[String] {
        &self.hypothesis_sentences
    }

    pub fn cell(&self, row: usize, col: usize) -> &NliDistribution<T> {
        assert!(row < self.rows() && col < self.cols(), "cell ({row}, {col}) out of bounds");
        &self.cells[row * self.cols() + col]
    }

    pub fn signal(&self, row: usize, col: usize) -> T {
        self.cell(row, col).signal()
    }

    pub fn column_signals(&self, col: usize) -> impl Iterator<Item = T> + '_ {
        (0..self.rows()).map(move |row| self.signal(row, col))
    }
}

/// Splits both texts into sentences and classifies every
/// (premise sentence, hypothesis sentence) pair in a single backend call.
pub fn build_pair_matrix<T: Scalar, B: NliBackend<T> + ?Sized>(
    premise: &str,
    hypothesis: &str,
    backend: &B,
    splitter: &SentenceSplitter,
) -> Result<PairMatrix<T>, ScoringError> {
    let premise_sentences = splitter.split(premise);
    if premise_sentences.is_empty() {
        return Err(ScoringError::EmptyText("premise"));
    }
    let hypothesis_sentences = splitter.split(hypothesis);
    if hypothesis_sentences.is_empty() {
        return Err(ScoringError::EmptyText("hypothesis"));
    }
    let pairs: Vec<SentencePair> = premise_sentences
        .iter()
        .flat_map(|p| hypothesis_sentences.iter().map(move |h| SentencePair::new(p.clone(), h.clone())))
        .collect();
    let cells = backend.classify(&pairs)?;
    if cells.len() != pairs.len() {
        return Err(ScoringError::ContractViolation(format!(
            "backend returned {} distributions for {} pairs",
            cells.len(),
            pairs.len()
        )));
    }
    PairMatrix::new(premise_sentences, hypothesis_sentences, cells)
}
