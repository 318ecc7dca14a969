use serde::{Deserialize, Serialize};
use veritas_core::{BinaryLabel, PipelineKind, Scalar, ScorerKind};

use crate::error::EvalError;

/// Confusion counts with `Reliable` as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn from_predictions(predictions: &[BinaryLabel], labels: &[BinaryLabel]) -> Result<Self, EvalError> {
        if predictions.len() != labels.len() {
            return Err(EvalError::LengthMismatch { what: "predictions vs labels", left: predictions.len(), right: labels.len() });
        }
        if predictions.is_empty() {
            return Err(EvalError::Empty("prediction list".into()));
        }
        let mut c = Confusion::default();
        for (p, l) in predictions.iter().zip(labels) {
            match (p.is_reliable(), l.is_reliable()) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        Ok(c)
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn rates<T: Scalar>(&self) -> Rates<T> {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                (T::zero(), true)
            } else {
                (T::from_count(num) / T::from_count(den), false)
            }
        };
        let (accuracy, _) = ratio(self.tp + self.tn, self.total());
        let (precision, precision_undefined) = ratio(self.tp, self.tp + self.fp);
        let (recall, recall_undefined) = ratio(self.tp, self.tp + self.fn_);
        let f1 = if precision + recall > T::zero() {
            T::lit(2.0) * precision * recall / (precision + recall)
        } else {
            T::zero()
        };
        Rates { accuracy, precision, recall, f1, precision_undefined, recall_undefined }
    }
}

/// Accuracy, precision, recall and F1. A zero denominator yields 0 and
/// sets the matching flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Rates<T: Scalar> {
    pub accuracy: T,
    pub precision: T,
    pub recall: T,
    pub f1: T,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

/// Metrics for one model over one split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scorer: Option<ScorerKind>,
    pub split: String,
    pub confusion: Confusion,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

impl MetricsReport {
    pub fn from_confusion(model: impl Into<String>, split: impl Into<String>, confusion: Confusion) -> Self {
        let r: Rates<f64> = confusion.rates();
        MetricsReport {
            model: model.into(),
            pipeline: None,
            scorer: None,
            split: split.into(),
            confusion,
            accuracy: r.accuracy,
            precision: r.precision,
            recall: r.recall,
            f1: r.f1,
            precision_undefined: r.precision_undefined,
            recall_undefined: r.recall_undefined,
        }
    }

    pub fn for_pipeline(mut self, pipeline: PipelineKind, scorer: ScorerKind) -> Self {
        self.pipeline = Some(pipeline);
        self.scorer = Some(scorer);
        self
    }
}

pub fn compute_metrics(
    model: &str,
    split: &str,
    predictions: &[BinaryLabel],
    labels: &[BinaryLabel],
) -> Result<MetricsReport, EvalError> {
    Ok(MetricsReport::from_confusion(model, split, Confusion::from_predictions(predictions, labels)?))
}

/// Display name such as "Article + SummaC-ZS".
pub fn model_name(pipeline: PipelineKind, scorer: ScorerKind) -> String {
    format!("{} + {}", pipeline_display(pipeline), scorer_display(scorer))
}

pub fn pipeline_display(pipeline: PipelineKind) -> &'static str {
    match pipeline {
        PipelineKind::Article => "Article",
        PipelineKind::QuestionAnswer => "Question-Answer",
        PipelineKind::SlmMistral => "SLM Mistral-7B",
        PipelineKind::SlmPhi3 => "SLM Phi-3",
    }
}

pub fn scorer_display(scorer: ScorerKind) -> &'static str {
    match scorer {
        ScorerKind::FactCc => "FactCC",
        ScorerKind::SummacZs => "SummaC-ZS",
        ScorerKind::SummacConv => "SummaC-Conv",
    }
}
