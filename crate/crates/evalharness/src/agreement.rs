use std::collections::BTreeMap;

use serde::Serialize;
use veritas_core::BinaryLabel;

use crate::error::EvalError;

pub const MAX_AGREEMENT_MODELS: usize = 4;

/// One model's predictions keyed by claim id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelPredictions {
    pub model: String,
    pub predictions: BTreeMap<String, BinaryLabel>,
}

impl ModelPredictions {
    pub fn new(model: impl Into<String>, predictions: impl IntoIterator<Item = (String, BinaryLabel)>) -> Self {
        ModelPredictions { model: model.into(), predictions: predictions.into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelAgreement {
    pub model: String,
    pub correct: Vec<String>,
    pub incorrect: Vec<String>,
    /// Correct here and incorrect for every other model.
    pub unique_correct: Vec<String>,
    /// Incorrect here and correct for every other model.
    pub unique_incorrect: Vec<String>,
}

/// Venn region: ids whose set of correct (resp. incorrect) models is
/// exactly `models`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub models: Vec<String>,
    pub correct: usize,
    pub incorrect: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub models: Vec<String>,
    pub total: usize,
    pub per_model: Vec<ModelAgreement>,
    /// Every non-empty subset of models, in bitmask order.
    pub regions: Vec<Region>,
}

impl AgreementReport {
    pub fn region(&self, models: &[&str]) -> Option<&Region> {
        self.regions.iter().find(|r| r.models.len() == models.len() && models.iter().all(|m| r.models.iter().any(|x| x == m)))
    }
}

pub fn agreement_analysis(
    models: &[ModelPredictions],
    labels: &BTreeMap<String, BinaryLabel>,
) -> Result<AgreementReport, EvalError> {
    let n = models.len();
    if !(2..=MAX_AGREEMENT_MODELS).contains(&n) {
        return Err(EvalError::ModelCount(n));
    }
    for m in models {
        if m.predictions.len() != labels.len() || !m.predictions.keys().all(|id| labels.contains_key(id)) {
            return Err(EvalError::IdMismatch { model: m.model.clone() });
        }
    }
    let mut correct_mask: BTreeMap<&str, usize> = BTreeMap::new();
    for (id, label) in labels {
        let mask = models
            .iter()
            .enumerate()
            .filter(|(_, m)| m.predictions[id] == *label)
            .fold(0usize, |acc, (i, _)| acc | (1 << i));
        correct_mask.insert(id.as_str(), mask);
    }
    let full = (1usize << n) - 1;
    let per_model = models
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let bit = 1 << i;
            let ids = |pred: &dyn Fn(usize) -> bool| -> Vec<String> {
                correct_mask.iter().filter(|(_, &mask)| pred(mask)).map(|(id, _)| id.to_string()).collect()
            };
            ModelAgreement {
                model: m.model.clone(),
                correct: ids(&|mask| mask & bit != 0),
                incorrect: ids(&|mask| mask & bit == 0),
                unique_correct: ids(&|mask| mask == bit),
                unique_incorrect: ids(&|mask| mask == full & !bit),
            }
        })
        .collect();
    let regions = (1..=full)
        .map(|set| Region {
            models: (0..n).filter(|i| set & (1 << i) != 0).map(|i| models[i].model.clone()).collect(),
            correct: correct_mask.values().filter(|&&m| m == set).count(),
            incorrect: correct_mask.values().filter(|&&m| full & !m == set).count(),
        })
        .collect();
    Ok(AgreementReport {
        models: models.iter().map(|m| m.model.clone()).collect(),
        total: labels.len(),
        per_model,
        regions,
    })
}
