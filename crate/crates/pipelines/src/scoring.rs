use std::sync::Arc;

use serde::{Deserialize, Serialize};
use veritas_core::{Scalar, ScorerKind};
use veritas_nli::{
    build_pair_matrix, factcc_classify, summac_conv_score, summac_zs_score, ConsistencyBackend, ConvScorerConfig,
    NliBackend, ScoringError, SentenceSplitter, DEFAULT_BIN_COUNT, FACTCC_THRESHOLD,
};

/// Decision threshold per scorer; a verdict is Reliable iff score >= threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub factcc: f64,
    pub summac_zs: f64,
    pub summac_conv: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { factcc: FACTCC_THRESHOLD, summac_zs: 0.0, summac_conv: 0.0 }
    }
}

impl Thresholds {
    pub fn get(&self, scorer: ScorerKind) -> f64 {
        match scorer {
            ScorerKind::FactCc => self.factcc,
            ScorerKind::SummacZs => self.summac_zs,
            ScorerKind::SummacConv => self.summac_conv,
        }
    }

    pub fn with(mut self, scorer: ScorerKind, value: f64) -> Self {
        match scorer {
            ScorerKind::FactCc => self.factcc = value,
            ScorerKind::SummacZs => self.summac_zs = value,
            ScorerKind::SummacConv => self.summac_conv = value,
        }
        self
    }
}

/// Backends and settings for the three scorers.
#[derive(Clone)]
pub struct Scorers<T: Scalar> {
    pub nli: Arc<dyn NliBackend<T>>,
    pub consistency: Arc<dyn ConsistencyBackend<T>>,
    pub conv: ConvScorerConfig<T>,
    pub splitter: SentenceSplitter,
    pub thresholds: Thresholds,
}

impl<T: Scalar> Scorers<T> {
    pub fn new(nli: Arc<dyn NliBackend<T>>, consistency: Arc<dyn ConsistencyBackend<T>>) -> Self {
        Scorers {
            nli,
            consistency,
            conv: ConvScorerConfig::centre_ramp(DEFAULT_BIN_COUNT).expect("default bin count is valid"),
            splitter: SentenceSplitter::default(),
            thresholds: Thresholds::default(),
        }
    }

    pub fn with_conv(mut self, conv: ConvScorerConfig<T>) -> Self {
        self.conv = conv;
        self
    }

    pub fn with_thresholds(mut self, thresholds: Thresholds) -> Self {
        self.thresholds = thresholds;
        self
    }

    pub fn with_splitter(mut self, splitter: SentenceSplitter) -> Self {
        self.splitter = splitter;
        self
    }

    /// Raw score of `hypothesis` against `premise`.
    pub fn score(&self, scorer: ScorerKind, premise: &str, hypothesis: &str) -> Result<T, ScoringError> {
        match scorer {
            ScorerKind::FactCc => factcc_classify(premise, hypothesis, self.consistency.as_ref()).map(|(s, _)| s),
            ScorerKind::SummacZs => {
                let m = build_pair_matrix(premise, hypothesis, self.nli.as_ref(), &self.splitter)?;
                Ok(summac_zs_score(&m))
            }
            ScorerKind::SummacConv => {
                let m = build_pair_matrix(premise, hypothesis, self.nli.as_ref(), &self.splitter)?;
                Ok(summac_conv_score(&m, &self.conv))
            }
        }
    }
}

impl<T: Scalar> std::fmt::Debug for Scorers<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scorers")
            .field("conv_bins", &self.conv.bin_count())
            .field("thresholds", &self.thresholds)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use veritas_nli::mock::{ConstantConsistency, ConstantNli};

    #[test]
    fn default_thresholds() {
        let t = Thresholds::default();
        assert_eq!(t.get(ScorerKind::FactCc), 0.5);
        assert_eq!(t.get(ScorerKind::SummacZs), 0.0);
        assert_eq!(t.get(ScorerKind::SummacConv), 0.0);
        assert_eq!(t.with(ScorerKind::SummacZs, 0.3).summac_zs, 0.3);
    }

    #[test]
    fn constant_entailment_scores_one() {
        let s: Scorers<f64> = Scorers::new(Arc::new(ConstantNli::entailing()), Arc::new(ConstantConsistency(1.0)));
        assert_eq!(s.score(ScorerKind::SummacZs, "A. B.", "C.").unwrap(), 1.0);
        assert_eq!(s.score(ScorerKind::FactCc, "A. B.", "C.").unwrap(), 1.0);
        // top bin centre under the default ramp
        assert!((s.score(ScorerKind::SummacConv, "A. B.", "C.").unwrap() - 0.98).abs() < 1e-12);
    }

    #[test]
    fn empty_premise_is_an_error() {
        let s: Scorers<f64> = Scorers::new(Arc::new(ConstantNli::entailing()), Arc::new(ConstantConsistency(1.0)));
        for kind in ScorerKind::ALL {
            assert!(s.score(kind, " ", "C.").is_err());
        }
    }
}
