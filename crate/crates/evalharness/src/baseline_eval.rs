use serde::Serialize;
use tracing::info;
use veritas_baselines::{BaselineKind, BaselineModelF64, Lexicon, TrainOptions};
use veritas_core::BinaryLabel;

use crate::dataset::Dataset;
use crate::error::EvalError;
use crate::metrics::{compute_metrics, MetricsReport};
use crate::split::{stratified_split, DEFAULT_SPLIT_SEED, DEFAULT_TRAIN_FRACTION};

#[derive(Debug, Clone)]
pub struct BaselineEvalConfig {
    pub kinds: Vec<BaselineKind>,
    pub options: TrainOptions,
    /// Used only when no separate test file is given.
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for BaselineEvalConfig {
    fn default() -> Self {
        BaselineEvalConfig {
            kinds: BaselineKind::ALL.to_vec(),
            options: TrainOptions::default(),
            train_fraction: DEFAULT_TRAIN_FRACTION,
            seed: DEFAULT_SPLIT_SEED,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BaselineOutcome {
    pub models: Vec<BaselineModelF64>,
    pub metrics: Vec<MetricsReport>,
    pub train_size: usize,
    pub test_size: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineSummary {
    pub train_size: usize,
    pub test_size: usize,
    pub metrics: Vec<MetricsReport>,
}

fn predict_all(model: &BaselineModelF64, data: &Dataset, lexicon: &Lexicon) -> Vec<BinaryLabel> {
    data.records.iter().map(|r| model.predict_text(&r.text, lexicon)).collect()
}

/// Trains each baseline on `train` and reports it on the test data and on
/// every extra dataset. Without `test`, `train` is split with a seeded
/// stratified split.
pub fn evaluate_baselines(
    train: &Dataset,
    test: Option<&Dataset>,
    extra: &[&Dataset],
    lexicon: &Lexicon,
    config: &BaselineEvalConfig,
) -> Result<BaselineOutcome, EvalError> {
    let (train_set, test_set) = match test {
        Some(t) => (train.clone(), t.clone()),
        None => {
            let split = stratified_split(&train.labels(), config.train_fraction, config.seed)?;
            (
                train.subset(&format!("{} (train)", train.name), &split.selected),
                train.subset(&format!("{} (test)", train.name), &split.rest),
            )
        }
    };
    if train_set.is_empty() || test_set.is_empty() {
        return Err(EvalError::Empty("baseline train or test set".into()));
    }
    let texts = train_set.texts();
    let labels = train_set.labels();
    let mut models = Vec::new();
    let mut metrics = Vec::new();
    for &kind in &config.kinds {
        let model = BaselineModelF64::train(kind, &texts, &labels, lexicon, &config.options)?;
        for data in std::iter::once(&test_set).chain(extra.iter().copied()) {
            let preds = predict_all(&model, data, lexicon);
            metrics.push(compute_metrics(kind.display_name(), &data.name, &preds, &data.labels())?);
        }
        info!(model = kind.display_name(), "baseline trained");
        models.push(model);
    }
    Ok(BaselineOutcome { models, metrics, train_size: train_set.len(), test_size: test_set.len() })
}

impl BaselineOutcome {
    pub fn summary(&self) -> BaselineSummary {
        BaselineSummary { train_size: self.train_size, test_size: self.test_size, metrics: self.metrics.clone() }
    }
}
