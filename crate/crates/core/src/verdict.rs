use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::evidence::{check_duration, EvidenceBundle};
use crate::label::BinaryLabel;
use crate::{CoreError, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineKind {
    Article,
    #[serde(rename = "qa")]
    QuestionAnswer,
    SlmMistral,
    SlmPhi3,
}

impl PipelineKind {
    pub const ALL: [PipelineKind; 4] = [
        PipelineKind::Article,
        PipelineKind::QuestionAnswer,
        PipelineKind::SlmMistral,
        PipelineKind::SlmPhi3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PipelineKind::Article => "article",
            PipelineKind::QuestionAnswer => "qa",
            PipelineKind::SlmMistral => "slm-mistral",
            PipelineKind::SlmPhi3 => "slm-phi3",
        }
    }
}

impl fmt::Display for PipelineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PipelineKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PipelineKind::ALL
            .into_iter()
            .find(|p| p.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown pipeline {s:?} (expected article|qa|slm-mistral|slm-phi3)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScorerKind {
    #[serde(rename = "factcc")]
    FactCc,
    SummacZs,
    SummacConv,
}

impl ScorerKind {
    pub const ALL: [ScorerKind; 3] = [ScorerKind::FactCc, ScorerKind::SummacZs, ScorerKind::SummacConv];

    pub fn as_str(self) -> &'static str {
        match self {
            ScorerKind::FactCc => "factcc",
            ScorerKind::SummacZs => "summac-zs",
            ScorerKind::SummacConv => "summac-conv",
        }
    }

    /// Closed interval a score from this scorer must lie in.
    pub fn score_range(self) -> (f64, f64) {
        match self {
            ScorerKind::FactCc => (0.0, 1.0),
            ScorerKind::SummacZs | ScorerKind::SummacConv => (-1.0, 1.0),
        }
    }

    pub fn check_score(self, score: f64) -> Result<(), CoreError> {
        let (lo, hi) = self.score_range();
        if score.is_finite() && (lo..=hi).contains(&score) {
            Ok(())
        } else {
            Err(CoreError::ScoreOutOfRange {
                scorer: self.as_str(),
                score,
                lo,
                hi,
            })
        }
    }
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScorerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScorerKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| format!("unknown scorer {s:?} (expected factcc|summac-zs|summac-conv)"))
    }
}

/// Wall-clock seconds spent retrieving evidence and scoring it.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StageTimings {
    scrape_seconds: f64,
    score_seconds: f64,
}

impl StageTimings {
    pub fn new(scrape_seconds: f64, score_seconds: f64) -> Result<Self, CoreError> {
        check_duration("scrape_seconds", scrape_seconds)?;
        check_duration("score_seconds", score_seconds)?;
        Ok(StageTimings {
            scrape_seconds,
            score_seconds,
        })
    }

    pub fn scrape_seconds(&self) -> f64 {
        self.scrape_seconds
    }

    pub fn score_seconds(&self) -> f64 {
        self.score_seconds
    }

    pub fn total_seconds(&self) -> f64 {
        self.scrape_seconds + self.score_seconds
    }
}

/// Output of one pipeline run over one claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRecord {
    claim_id: String,
    pipeline: PipelineKind,
    scorer: ScorerKind,
    score: f64,
    threshold: f64,
    verdict: BinaryLabel,
    evidence: EvidenceBundle,
    timings: StageTimings,
}

impl VerdictRecord {
    /// Builds the record; the verdict is `Reliable` iff `score >= threshold`.
    pub fn new(
        claim_id: impl Into<String>,
        pipeline: PipelineKind,
        scorer: ScorerKind,
        score: f64,
        threshold: f64,
        evidence: EvidenceBundle,
        timings: StageTimings,
    ) -> Result<Self, CoreError> {
        scorer.check_score(score)?;
        Ok(VerdictRecord {
            claim_id: claim_id.into(),
            pipeline,
            scorer,
            score,
            threshold,
            verdict: BinaryLabel::from_bool(score >= threshold),
            evidence,
            timings,
        })
    }

    pub fn claim_id(&self) -> &str {
        &self.claim_id
    }

    pub fn pipeline(&self) -> PipelineKind {
        self.pipeline
    }

    pub fn scorer(&self) -> ScorerKind {
        self.scorer
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn verdict(&self) -> BinaryLabel {
        self.verdict
    }

    pub fn evidence(&self) -> &EvidenceBundle {
        &self.evidence
    }

    pub fn timings(&self) -> StageTimings {
        self.timings
    }

    /// Copy with every wall-clock measurement zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut out = self.clone();
        out.timings = StageTimings::default();
        out.evidence = out
            .evidence
            .with_scrape_seconds(0.0)
            .expect("zero is a valid duration");
        out
    }
}

/// Everything a reader needs to audit a verdict: the evidence, the exact
/// premise handed to the scorer, and where it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplanationRecord {
    headline: String,
    generated_question: Option<String>,
    question_fallback: bool,
    stage: Stage,
    premise: String,
    evidence: EvidenceBundle,
    scorer: ScorerKind,
    score: f64,
    threshold: f64,
    verdict: BinaryLabel,
    source_urls: Vec<String>,
}

impl ExplanationRecord {
    pub fn new(
        headline: impl Into<String>,
        generated_question: Option<String>,
        question_fallback: bool,
        premise: impl Into<String>,
        record: &VerdictRecord,
    ) -> Self {
        let evidence = record.evidence().clone();
        ExplanationRecord {
            headline: headline.into(),
            generated_question,
            question_fallback,
            stage: evidence.stage(),
            premise: premise.into(),
            source_urls: evidence.source_urls(),
            evidence,
            scorer: record.scorer(),
            score: record.score(),
            threshold: record.threshold(),
            verdict: record.verdict(),
        }
    }

    pub fn headline(&self) -> &str {
        &self.headline
    }

    pub fn generated_question(&self) -> Option<&str> {
        self.generated_question.as_deref()
    }

    pub fn question_fallback(&self) -> bool {
        self.question_fallback
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn premise(&self) -> &str {
        &self.premise
    }

    pub fn evidence(&self) -> &EvidenceBundle {
        &self.evidence
    }

    pub fn source_urls(&self) -> &[String] {
        &self.source_urls
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn verdict(&self) -> BinaryLabel {
        self.verdict
    }

    pub fn scorer(&self) -> ScorerKind {
        self.scorer
    }

    pub fn without_timings(&self) -> Self {
        let mut out = self.clone();
        out.evidence = out
            .evidence
            .with_scrape_seconds(0.0)
            .expect("zero is a valid duration");
        out
    }
}
