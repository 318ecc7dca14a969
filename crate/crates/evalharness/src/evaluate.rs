use std::collections::BTreeMap;

use tracing::info;
use veritas_baselines::LogRegConfig;
use veritas_core::{BinaryLabel, PipelineKind, ScorerKind};
use veritas_nli::{conv_score_from_histograms, ConvScorerConfigF64, DEFAULT_GRID_STEP};

use crate::agreement::{agreement_analysis, ModelPredictions, MAX_AGREEMENT_MODELS};
use crate::calibrate::{choose_threshold, fit_conv_config, ThresholdEntry};
use crate::dataset::Dataset;
use crate::error::EvalError;
use crate::metrics::{compute_metrics, model_name};
use crate::report::{EvalReport, SplitSummary};
use crate::runner::{BatchRunner, ClaimRun};
use crate::split::{check_leakage, stratified_split, Split, DEFAULT_CALIBRATION_FRACTION, DEFAULT_SPLIT_SEED};
use crate::timing::timing_stats;

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub pipelines: Vec<PipelineKind>,
    pub scorers: Vec<ScorerKind>,
    pub calibration_fraction: f64,
    pub seed: u64,
    pub grid_step: f64,
    /// Refit the convolution filter per pipeline on the calibration split.
    pub fit_conv: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            pipelines: PipelineKind::ALL.to_vec(),
            scorers: ScorerKind::ALL.to_vec(),
            calibration_fraction: DEFAULT_CALIBRATION_FRACTION,
            seed: DEFAULT_SPLIT_SEED,
            grid_step: DEFAULT_GRID_STEP,
            fit_conv: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub split: Split,
    pub thresholds: Vec<ThresholdEntry>,
    pub conv_configs: BTreeMap<PipelineKind, ConvScorerConfigF64>,
    pub runs: Vec<ClaimRun>,
    pub report: EvalReport,
}

impl EvalOutcome {
    pub fn threshold(&self, pipeline: PipelineKind, scorer: ScorerKind) -> Option<f64> {
        self.thresholds.iter().find(|t| t.pipeline == pipeline && t.scorer == scorer).map(|t| t.threshold)
    }
}

/// Default decision boundary when calibration is not possible.
pub fn default_threshold(scorer: ScorerKind) -> f64 {
    veritas_pipelines::Thresholds::default().get(scorer)
}

/// Claims without evidence count as unreliable.
pub fn predict(run: &ClaimRun, scorer: ScorerKind, threshold: f64) -> BinaryLabel {
    match run.score(scorer) {
        Some(s) => BinaryLabel::from_bool(s >= threshold),
        None => BinaryLabel::Unreliable,
    }
}

fn run_index(runs: &[ClaimRun]) -> BTreeMap<(&str, PipelineKind), &ClaimRun> {
    runs.iter().map(|r| ((r.claim_id.as_str(), r.pipeline), r)).collect()
}

/// Calibration half of an evaluation: fits per-pipeline conv filters (when
/// asked) and picks thresholds from calibration rows that found evidence.
pub fn calibrate_runs(
    dataset: &Dataset,
    calibration: &[usize],
    runs: &mut [ClaimRun],
    config: &EvalConfig,
) -> Result<(Vec<ThresholdEntry>, BTreeMap<PipelineKind, ConvScorerConfigF64>), EvalError> {
    let label_of: BTreeMap<&str, BinaryLabel> = dataset.ids().into_iter().zip(dataset.labels()).collect();
    let calib_ids: std::collections::HashSet<&str> =
        calibration.iter().map(|&i| dataset.records[i].id.as_str()).collect();
    let mut conv_configs = BTreeMap::new();
    if config.fit_conv && config.scorers.contains(&ScorerKind::SummacConv) {
        for &p in &config.pipelines {
            let mut hists = Vec::new();
            let mut labels = Vec::new();
            for r in runs.iter().filter(|r| r.pipeline == p && !r.no_evidence() && calib_ids.contains(r.claim_id.as_str())) {
                for h in &r.histograms {
                    hists.push(h.clone());
                    labels.push(label_of[r.claim_id.as_str()]);
                }
            }
            let Some(first) = hists.first() else { continue };
            if !BinaryLabel::ALL.iter().all(|c| labels.contains(c)) {
                continue;
            }
            let cfg = fit_conv_config(&hists, &labels, first.len(), LogRegConfig::default())?;
            for r in runs.iter_mut().filter(|r| r.pipeline == p && !r.no_evidence()) {
                let score = conv_score_from_histograms(&r.histograms, &cfg);
                if let Some(s) = r.scores.get_mut(&ScorerKind::SummacConv) {
                    s.score = score;
                }
            }
            conv_configs.insert(p, cfg);
        }
    }
    let mut thresholds = Vec::new();
    for &p in &config.pipelines {
        for &k in &config.scorers {
            let (scores, labels): (Vec<f64>, Vec<BinaryLabel>) = runs
                .iter()
                .filter(|r| r.pipeline == p && calib_ids.contains(r.claim_id.as_str()))
                .filter_map(|r| r.score(k).map(|s| (s, label_of[r.claim_id.as_str()])))
                .unzip();
            thresholds.push(choose_threshold(p, k, &scores, &labels, config.grid_step, default_threshold(k)));
        }
    }
    Ok((thresholds, conv_configs))
}

/// Runs every configured pipeline and scorer over `dataset`, calibrates on
/// a stratified split and reports metrics on the remaining rows.
pub fn evaluate(dataset: &Dataset, runner: &BatchRunner, config: &EvalConfig) -> Result<EvalOutcome, EvalError> {
    if dataset.is_empty() {
        return Err(EvalError::Empty(format!("dataset {}", dataset.name)));
    }
    let labels = dataset.labels();
    let split = stratified_split(&labels, config.calibration_fraction, config.seed)?;
    let ids = dataset.ids();
    let calib_ids: Vec<&str> = split.selected.iter().map(|&i| ids[i]).collect();
    let report_ids: Vec<&str> = split.rest.iter().map(|&i| ids[i]).collect();
    check_leakage(&calib_ids, &report_ids)?;
    if split.rest.is_empty() {
        return Err(EvalError::Split("reporting split is empty".into()));
    }
    info!(calibration = calib_ids.len(), reporting = report_ids.len(), "split");

    let mut runs = runner.run(&dataset.records, &config.pipelines, &config.scorers)?;
    let (thresholds, conv_configs) = calibrate_runs(dataset, &split.selected, &mut runs, config)?;

    let split_label = format!("reporting ({:.0}%)", (1.0 - config.calibration_fraction) * 100.0);
    let index = run_index(&runs);
    let report_labels: Vec<BinaryLabel> = split.rest.iter().map(|&i| labels[i]).collect();
    let mut metrics = Vec::new();
    let mut per_model: BTreeMap<ScorerKind, Vec<ModelPredictions>> = BTreeMap::new();
    for &p in &config.pipelines {
        for &k in &config.scorers {
            let t = thresholds.iter().find(|e| e.pipeline == p && e.scorer == k).expect("threshold per pair").threshold;
            let preds: Vec<BinaryLabel> = report_ids.iter().map(|id| predict(index[&(*id, p)], k, t)).collect();
            let name = model_name(p, k);
            metrics.push(compute_metrics(&name, &split_label, &preds, &report_labels)?.for_pipeline(p, k));
            per_model.entry(k).or_default().push(ModelPredictions::new(
                name,
                report_ids.iter().map(|id| id.to_string()).zip(preds.iter().copied()),
            ));
        }
    }

    let truth: BTreeMap<String, BinaryLabel> =
        report_ids.iter().map(|id| id.to_string()).zip(report_labels.iter().copied()).collect();
    let mut agreement = Vec::new();
    for models in per_model.values() {
        if (2..=MAX_AGREEMENT_MODELS).contains(&models.len()) {
            agreement.push(agreement_analysis(models, &truth)?);
        }
    }

    let samples: Vec<_> = runs.iter().flat_map(ClaimRun::timing_samples).collect();
    let mut report = EvalReport::new(metrics);
    report.dataset = Some(dataset.name.clone());
    report.split = Some(SplitSummary {
        seed: config.seed,
        calibration_fraction: config.calibration_fraction,
        calibration_size: split.selected.len(),
        reporting_size: split.rest.len(),
        calibration_ids: calib_ids.iter().map(|s| s.to_string()).collect(),
    });
    report.calibration = thresholds.clone();
    report.agreement = agreement;
    report.timing = Some(timing_stats(&samples));
    Ok(EvalOutcome { split, thresholds, conv_configs, runs, report })
}

/// Calibration only: runs the calibration rows and returns the thresholds.
pub fn calibrate_dataset(
    dataset: &Dataset,
    runner: &BatchRunner,
    config: &EvalConfig,
) -> Result<(Split, Vec<ThresholdEntry>), EvalError> {
    let split = stratified_split(&dataset.labels(), config.calibration_fraction, config.seed)?;
    let calib = dataset.subset(&dataset.name, &split.selected);
    let mut runs = runner.run(&calib.records, &config.pipelines, &config.scorers)?;
    let all: Vec<usize> = (0..calib.len()).collect();
    let (thresholds, _) = calibrate_runs(&calib, &all, &mut runs, config)?;
    Ok((split, thresholds))
}
