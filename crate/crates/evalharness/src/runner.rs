use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Instant;

use serde::Serialize;
use tracing::info;
use veritas_core::{ClaimRecord, PipelineKind, ScorerKind, Stage};
use veritas_nli::{build_pair_matrix, column_histogram, factcc_classify, summac_zs_score, conv_score_from_histograms};
use veritas_pipelines::{EvidenceCache, PipelineDepsF64};

use crate::error::EvalError;
use crate::timing::{TimedStage, TimingSample};

pub const DEFAULT_BATCH_WORKERS: usize = 4;

/// Scores of one (claim, pipeline) pair under each requested scorer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimRun {
    pub claim_id: String,
    pub pipeline: PipelineKind,
    /// `None` when retrieval found no evidence.
    pub stage: Option<Stage>,
    pub question_fallback: bool,
    pub scrape_seconds: f64,
    pub scores: BTreeMap<ScorerKind, ScoredRun>,
    /// Column histograms of the pair matrix, kept for fitting the
    /// convolution filter.
    #[serde(skip)]
    pub histograms: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoredRun {
    pub score: f64,
    pub seconds: f64,
}

impl ClaimRun {
    pub fn no_evidence(&self) -> bool {
        self.stage.is_none()
    }

    pub fn score(&self, scorer: ScorerKind) -> Option<f64> {
        self.scores.get(&scorer).map(|s| s.score)
    }

    pub fn timing_samples(&self) -> Vec<TimingSample> {
        if self.no_evidence() {
            return Vec::new();
        }
        let mut out = vec![TimingSample { pipeline: self.pipeline, stage: TimedStage::Scrape, seconds: self.scrape_seconds }];
        for (&k, s) in &self.scores {
            out.push(TimingSample { pipeline: self.pipeline, stage: TimedStage::Score(k), seconds: s.seconds });
        }
        out
    }
}

/// Runs pipelines over many claims with bounded parallelism. Evidence is
/// gathered once per (claim, pipeline) and the pair matrix is built once
/// for both SummaC reductions; its construction time is charged to each.
pub struct BatchRunner {
    deps: PipelineDepsF64,
    workers: usize,
}

impl BatchRunner {
    pub fn new(deps: PipelineDepsF64) -> Self {
        let deps = match deps.cache {
            Some(_) => deps,
            None => deps.with_cache(Arc::new(EvidenceCache::new())),
        };
        BatchRunner { deps, workers: DEFAULT_BATCH_WORKERS }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn deps(&self) -> &PipelineDepsF64 {
        &self.deps
    }

    fn run_one(&self, claim: &ClaimRecord, pipeline: PipelineKind, scorers: &[ScorerKind]) -> Result<ClaimRun, EvalError> {
        let wrap = |e| EvalError::Pipeline { claim_id: claim.id.clone(), source: e };
        let mut run = ClaimRun {
            claim_id: claim.id.clone(),
            pipeline,
            stage: None,
            question_fallback: false,
            scrape_seconds: 0.0,
            scores: BTreeMap::new(),
            histograms: Vec::new(),
        };
        let evidence = match self.deps.gather(&claim.text, pipeline) {
            Ok(e) => e,
            Err(e) if e.is_no_evidence() => return Ok(run),
            Err(e) => return Err(wrap(e)),
        };
        run.stage = Some(evidence.bundle.stage());
        run.question_fallback = evidence.question_fallback;
        run.scrape_seconds = evidence.bundle.scrape_seconds();
        let s = &self.deps.scorers;
        let needs_matrix = scorers.iter().any(|k| *k != ScorerKind::FactCc);
        let (matrix, matrix_seconds) = if needs_matrix {
            let start = Instant::now();
            let m = build_pair_matrix(&evidence.premise, &evidence.headline, s.nli.as_ref(), &s.splitter)
                .map_err(|e| wrap(e.into()))?;
            (Some(m), start.elapsed().as_secs_f64())
        } else {
            (None, 0.0)
        };
        if let Some(m) = &matrix {
            run.histograms = (0..m.cols()).map(|j| column_histogram(m, j, s.conv.bin_count())).collect();
        }
        for &k in scorers {
            let start = Instant::now();
            let score = match k {
                ScorerKind::FactCc => {
                    factcc_classify(&evidence.premise, &evidence.headline, s.consistency.as_ref())
                        .map_err(|e| wrap(e.into()))?
                        .0
                }
                ScorerKind::SummacZs => summac_zs_score(matrix.as_ref().expect("matrix built")),
                ScorerKind::SummacConv => conv_score_from_histograms(&run.histograms, &s.conv),
            };
            let own = start.elapsed().as_secs_f64();
            let seconds = if k == ScorerKind::FactCc { own } else { own + matrix_seconds };
            run.scores.insert(k, ScoredRun { score, seconds });
        }
        Ok(run)
    }

    /// Results come back in (claim, pipeline) order regardless of
    /// completion order. The first infrastructure failure aborts the batch.
    pub fn run(
        &self,
        claims: &[ClaimRecord],
        pipelines: &[PipelineKind],
        scorers: &[ScorerKind],
    ) -> Result<Vec<ClaimRun>, EvalError> {
        let jobs: Vec<(usize, PipelineKind)> =
            (0..claims.len()).flat_map(|i| pipelines.iter().map(move |&p| (i, p))).collect();
        let results: Mutex<Vec<Option<Result<ClaimRun, EvalError>>>> =
            Mutex::new((0..jobs.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        let failed = std::sync::atomic::AtomicBool::new(false);
        thread::scope(|scope| {
            for _ in 0..self.workers.min(jobs.len().max(1)) {
                scope.spawn(|| loop {
                    let j = next.fetch_add(1, Ordering::SeqCst);
                    if j >= jobs.len() || failed.load(Ordering::SeqCst) {
                        break;
                    }
                    let (i, p) = jobs[j];
                    let r = self.run_one(&claims[i], p, scorers);
                    if r.is_err() {
                        failed.store(true, Ordering::SeqCst);
                    }
                    results.lock().unwrap()[j] = Some(r);
                });
            }
        });
        let mut out = Vec::with_capacity(jobs.len());
        for r in results.into_inner().unwrap() {
            match r {
                Some(r) => out.push(r?),
                None => continue,
            }
        }
        info!(runs = out.len(), "batch finished");
        Ok(out)
    }
}
