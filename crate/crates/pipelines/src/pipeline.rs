use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use tracing::{info, warn};
use veritas_core::{EvidenceBundle, ExplanationRecord, PipelineKind, Scalar, ScorerKind, StageTimings, VerdictRecord};
use veritas_retrieval::{RetrievalError, Retriever, Strategy, DEFAULT_TOP_K};

use crate::cache::EvidenceCache;
use crate::error::PipelineError;
use crate::generate::generate_question;
use crate::premise::{assemble_premise, DEFAULT_PREMISE_CAP};
use crate::scoring::Scorers;
use crate::slm::{SlmBackend, SlmKind};

/// The language model a pipeline uses, if any.
pub fn slm_kind(pipeline: PipelineKind) -> Option<SlmKind> {
    match pipeline {
        PipelineKind::SlmMistral => Some(SlmKind::Mistral),
        PipelineKind::SlmPhi3 => Some(SlmKind::Phi3),
        PipelineKind::Article | PipelineKind::QuestionAnswer => None,
    }
}

pub fn strategy(pipeline: PipelineKind) -> Strategy {
    match pipeline {
        PipelineKind::Article => Strategy::ArticlesOnly,
        _ => Strategy::QuickAnswerChain,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PipelineConfig {
    pub k: usize,
    pub premise_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { k: DEFAULT_TOP_K, premise_cap: DEFAULT_PREMISE_CAP }
    }
}

/// Evidence for one (headline, pipeline) pair, ready to be scored by any
/// scorer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GatheredEvidence {
    pub headline: String,
    pub pipeline: PipelineKind,
    pub generated_question: Option<String>,
    pub question_fallback: bool,
    pub bundle: EvidenceBundle,
    pub premise: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOutput {
    pub record: VerdictRecord,
    pub explanation: ExplanationRecord,
}

impl PipelineOutput {
    pub fn without_timings(&self) -> Self {
        PipelineOutput { record: self.record.without_timings(), explanation: self.explanation.without_timings() }
    }
}

/// Everything a pipeline run needs. Cheap to clone and safe to share
/// between threads.
#[derive(Clone)]
pub struct PipelineDeps<T: Scalar> {
    pub retriever: Arc<Retriever>,
    pub scorers: Scorers<T>,
    pub slm: Option<Arc<dyn SlmBackend>>,
    pub config: PipelineConfig,
    pub cache: Option<Arc<EvidenceCache>>,
}

impl<T: Scalar> PipelineDeps<T> {
    pub fn new(retriever: Arc<Retriever>, scorers: Scorers<T>) -> Self {
        PipelineDeps { retriever, scorers, slm: None, config: PipelineConfig::default(), cache: None }
    }

    pub fn with_slm(mut self, slm: Arc<dyn SlmBackend>) -> Self {
        self.slm = Some(slm);
        self
    }

    pub fn with_config(mut self, config: PipelineConfig) -> Self {
        self.config = config;
        self
    }

    pub fn with_cache(mut self, cache: Arc<EvidenceCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    fn retrieve(&self, query: &str, strategy: Strategy) -> Result<EvidenceBundle, RetrievalError> {
        let k = self.config.k;
        let fetch = || self.retriever.retrieve_evidence(query, strategy, k);
        match &self.cache {
            Some(cache) => cache.get_or_fetch(query, strategy, k, &self.retriever.source_id(), fetch),
            None => fetch(),
        }
    }

    /// Turns the headline into a search query, retrieves evidence and
    /// assembles the premise.
    pub fn gather(&self, headline: &str, pipeline: PipelineKind) -> Result<GatheredEvidence, PipelineError> {
        let headline = headline.trim();
        if headline.is_empty() {
            return Err(PipelineError::EmptyHeadline);
        }
        let (query, generated_question, question_fallback) = match slm_kind(pipeline) {
            None => (headline.to_string(), None, false),
            Some(kind) => {
                let slm = self.slm.as_ref().ok_or(PipelineError::MissingSlm(pipeline))?;
                match generate_question(headline, slm.as_ref(), kind) {
                    Ok(q) => (q.clone(), Some(q), false),
                    Err(e) => {
                        warn!(headline, error = %e, "question generation failed, searching the headline");
                        (headline.to_string(), None, true)
                    }
                }
            }
        };
        let bundle = self.retrieve(&query, strategy(pipeline)).map_err(|e| {
            if e.is_no_evidence() {
                PipelineError::NoEvidence { pipeline, source: e }
            } else {
                PipelineError::Retrieval(e)
            }
        })?;
        let premise = assemble_premise(bundle.passages(), &self.scorers.splitter, self.config.premise_cap);
        info!(pipeline = %pipeline, stage = bundle.stage().as_str(), query, "evidence gathered");
        Ok(GatheredEvidence {
            headline: headline.to_string(),
            pipeline,
            generated_question,
            question_fallback,
            bundle,
            premise,
        })
    }

    /// Scores gathered evidence against its headline.
    pub fn score(
        &self,
        claim_id: &str,
        evidence: &GatheredEvidence,
        scorer: ScorerKind,
    ) -> Result<PipelineOutput, PipelineError> {
        let start = Instant::now();
        let score = self.scorers.score(scorer, &evidence.premise, &evidence.headline)?.as_f64();
        let score_seconds = start.elapsed().as_secs_f64();
        let timings = StageTimings::new(evidence.bundle.scrape_seconds(), score_seconds)?;
        let record = VerdictRecord::new(
            claim_id,
            evidence.pipeline,
            scorer,
            score,
            self.scorers.thresholds.get(scorer),
            evidence.bundle.clone(),
            timings,
        )?;
        let explanation = ExplanationRecord::new(
            evidence.headline.clone(),
            evidence.generated_question.clone(),
            evidence.question_fallback,
            evidence.premise.clone(),
            &record,
        );
        Ok(PipelineOutput { record, explanation })
    }

    pub fn run(
        &self,
        claim_id: &str,
        headline: &str,
        pipeline: PipelineKind,
        scorer: ScorerKind,
    ) -> Result<PipelineOutput, PipelineError> {
        let evidence = self.gather(headline, pipeline)?;
        self.score(claim_id, &evidence, scorer)
    }

    pub fn run_article(&self, claim_id: &str, headline: &str, scorer: ScorerKind) -> Result<PipelineOutput, PipelineError> {
        self.run(claim_id, headline, PipelineKind::Article, scorer)
    }

    pub fn run_question_answer(
        &self,
        claim_id: &str,
        headline: &str,
        scorer: ScorerKind,
    ) -> Result<PipelineOutput, PipelineError> {
        self.run(claim_id, headline, PipelineKind::QuestionAnswer, scorer)
    }

    pub fn run_slm(
        &self,
        claim_id: &str,
        headline: &str,
        kind: SlmKind,
        scorer: ScorerKind,
    ) -> Result<PipelineOutput, PipelineError> {
        let pipeline = match kind {
            SlmKind::Mistral => PipelineKind::SlmMistral,
            SlmKind::Phi3 => PipelineKind::SlmPhi3,
        };
        self.run(claim_id, headline, pipeline, scorer)
    }
}
