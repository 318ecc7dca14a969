use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use tracing::warn;
use veritas_baselines::Lexicon;
use veritas_core::text::normalize_whitespace;
use veritas_core::{BinaryLabel, ClaimRecord, ExplanationRecord, PipelineKind, ScorerKind, VerdictRecord};
use veritas_eval::{
    calibrate_dataset, emit_report, evaluate, evaluate_baselines, load_eval, load_liar, samples_csv,
    scorer_display, timing_stats, write_eval_csv, BaselineEvalConfig, BatchRunner, ClaimRun, Dataset, EvalConfig,
    EvalReport, ReportFormat, ThresholdEntry, TimingReport,
};
use veritas_pipelines::{generate_fake_headline, PipelineError, PipelineOutput};

use crate::args::{BaselineArgs, EvalArgs, GenerateArgs, VerifyArgs};
use crate::backend;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::render::{pipeline_name, render_verdict};

pub const JSON_SCHEMA_VERSION: u32 = 1;

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

#[derive(Debug, Serialize)]
struct VerifyJson<'a> {
    schema_version: u32,
    record: &'a VerdictRecord,
    explanation: &'a ExplanationRecord,
}

fn load_thresholds(path: &Path) -> Result<Vec<ThresholdEntry>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<String, CliError> {
    let pipeline = args.pipeline.unwrap_or(cfg.pipeline);
    let scorer = args.scorer.unwrap_or(cfg.scorer);
    let mut deps = backend::deps(cfg, args.conv_config.as_deref())?;
    if let Some(path) = &args.thresholds {
        let entry = load_thresholds(path)?
            .into_iter()
            .find(|t| t.pipeline == pipeline && t.scorer == scorer)
            .ok_or_else(|| CliError::Input(format!("{}: no threshold for {pipeline} / {scorer}", path.display())))?;
        deps.scorers.thresholds = deps.scorers.thresholds.with(scorer, entry.threshold);
    }
    let out: PipelineOutput = deps.run("cli", &args.headline, pipeline, scorer)?;
    if cfg.json {
        return Ok(to_json(&VerifyJson {
            schema_version: JSON_SCHEMA_VERSION,
            record: &out.record,
            explanation: &out.explanation,
        }));
    }
    Ok(render_verdict(&out))
}

fn eval_config(cfg: &RunConfig, args: &EvalArgs) -> Result<EvalConfig, CliError> {
    let cfg = cfg.clone().with_calib_frac(args.calib_frac)?;
    let mut pipelines = args.pipeline.clone();
    if pipelines.is_empty() {
        pipelines = PipelineKind::ALL.to_vec();
    }
    let mut scorers = args.scorer.clone();
    if scorers.is_empty() {
        scorers = ScorerKind::ALL.to_vec();
    }
    dedup(&mut pipelines);
    dedup(&mut scorers);
    Ok(EvalConfig {
        pipelines,
        scorers,
        calibration_fraction: cfg.calib_frac,
        seed: cfg.seed,
        fit_conv: args.fit_conv,
        ..EvalConfig::default()
    })
}

fn dedup<T: PartialEq + Copy>(v: &mut Vec<T>) {
    let mut seen = Vec::new();
    v.retain(|x| {
        let fresh = !seen.contains(x);
        seen.push(*x);
        fresh
    });
}

fn runner(cfg: &RunConfig, args: &EvalArgs) -> Result<BatchRunner, CliError> {
    let r = BatchRunner::new(backend::deps(cfg, args.conv_config.as_deref())?);
    Ok(match args.workers {
        Some(w) => r.with_workers(w),
        None => r,
    })
}

fn write_report(path: &Path, report: &EvalReport) -> Result<(), CliError> {
    write_file(path, &emit_report(report, ReportFormat::from_path(path))?)
}

pub fn eval(cfg: &RunConfig, args: &EvalArgs) -> Result<String, CliError> {
    let config = eval_config(cfg, args)?;
    let data = load_eval(&args.dataset)?;
    let outcome = evaluate(&data, &runner(cfg, args)?, &config)?;
    if let Some(path) = &args.report {
        write_report(path, &outcome.report)?;
    }
    let format = if cfg.json { ReportFormat::Json } else { ReportFormat::Markdown };
    Ok(emit_report(&outcome.report, format)?)
}

pub fn calibrate(cfg: &RunConfig, args: &EvalArgs) -> Result<String, CliError> {
    let config = eval_config(cfg, args)?;
    let data = load_eval(&args.dataset)?;
    let (split, thresholds) = calibrate_dataset(&data, &runner(cfg, args)?, &config)?;
    if let Some(path) = &args.report {
        write_file(path, &to_json(&thresholds))?;
    }
    if cfg.json {
        return Ok(to_json(&thresholds));
    }
    let mut s = String::new();
    let _ = writeln!(s, "Calibrated on {} of {} rows (seed {})\n", split.selected.len(), data.len(), config.seed);
    let _ = writeln!(s, "| Pipeline | Scorer | Threshold | Calibration accuracy |");
    let _ = writeln!(s, "|---|---|---|---|");
    for t in &thresholds {
        let acc = match (t.calibration_accuracy, &t.note) {
            (Some(a), _) => format!("{:.2}%", a * 100.0),
            (None, Some(note)) => note.clone(),
            (None, None) => "fixed".into(),
        };
        let _ = writeln!(s, "| {} | {} | {:.2} | {} |", pipeline_name(t.pipeline), scorer_display(t.scorer), t.threshold, acc);
    }
    Ok(s)
}

pub fn bench(cfg: &RunConfig, args: &EvalArgs) -> Result<String, CliError> {
    let config = eval_config(cfg, args)?;
    let data = load_eval(&args.dataset)?;
    let runs = runner(cfg, args)?.run(&data.records, &config.pipelines, &config.scorers)?;
    let samples: Vec<_> = runs.iter().flat_map(ClaimRun::timing_samples).collect();
    let report = timing_stats(&samples);
    if let Some(path) = &args.report {
        let text = match ReportFormat::from_path(path) {
            ReportFormat::Csv => samples_csv(&samples),
            ReportFormat::Json => to_json(&report),
            ReportFormat::Markdown => timing_markdown(&report, &runs),
        };
        write_file(path, &text)?;
    }
    Ok(if cfg.json { to_json(&report) } else { timing_markdown(&report, &runs) })
}

fn timing_markdown(report: &TimingReport, runs: &[ClaimRun]) -> String {
    let mut s = String::new();
    let missing = runs.iter().filter(|r| r.no_evidence()).count();
    let _ = writeln!(s, "{} runs, {} without evidence (excluded)\n", runs.len(), missing);
    let _ = writeln!(s, "| Pipeline | Stage | n | Mean (s) | Median (s) | Q1 | Q3 | Outliers |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
    for st in &report.stages {
        let b = &st.stats;
        let _ = writeln!(
            s,
            "| {} | {} | {} | {:.4} | {:.4} | {:.4} | {:.4} | {} |",
            pipeline_name(st.pipeline),
            st.stage.label(),
            b.count,
            b.mean,
            b.median,
            b.q1,
            b.q3,
            b.outliers
        );
    }
    s
}

#[derive(Debug, Default, Serialize)]
struct GenerateSummary {
    input_rows: usize,
    duplicates: usize,
    skipped: Vec<String>,
    output_rows: usize,
}

#[derive(Debug, serde::Deserialize)]
struct TruthRow {
    headline: String,
    #[serde(default)]
    source: Option<String>,
    #[serde(default)]
    domain: Option<String>,
}

pub fn generate_evalset(cfg: &RunConfig, args: &GenerateArgs) -> Result<String, CliError> {
    let text = fs::read_to_string(&args.truths).map_err(|e| CliError::io(&args.truths, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let name = args.truths.display().to_string();
    let slm = backend::slm(cfg)?;
    let mut seen = HashSet::new();
    let mut summary = GenerateSummary::default();
    let mut records = Vec::new();
    for (i, row) in reader.deserialize::<TruthRow>().enumerate() {
        let row = row.map_err(|e| CliError::Input(format!("{name}: row {}: {e}", i + 1)))?;
        summary.input_rows += 1;
        let headline = normalize_whitespace(&row.headline);
        if headline.is_empty() {
            return Err(CliError::Input(format!("{name}: row {}: empty headline", i + 1)));
        }
        if !seen.insert(headline.to_lowercase()) {
            warn!(row = i + 1, %headline, "duplicate headline skipped");
            summary.duplicates += 1;
            continue;
        }
        let fake = match generate_fake_headline(&headline, slm.as_ref(), args.slm) {
            Ok(f) => f,
            Err(e @ PipelineError::DegenerateGeneration { .. }) => {
                warn!(row = i + 1, error = %e, "no usable fake headline, pair skipped");
                summary.skipped.push(headline);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let n = records.len() / 2 + 1;
        for (suffix, text, label) in [("reliable", &headline, BinaryLabel::Reliable), ("unreliable", &fake, BinaryLabel::Unreliable)] {
            let rec = ClaimRecord::new(format!("h{n:04}-{suffix}"), text.as_str())
                .and_then(|r| r.with_label(label))
                .map_err(|e| CliError::Input(e.to_string()))?
                .with_source(row.source.clone().filter(|s| !s.is_empty()))
                .with_domain_tag(row.domain.clone().filter(|s| !s.is_empty()));
            records.push(rec);
        }
    }
    summary.output_rows = records.len();
    write_file(&args.out, &write_eval_csv(&records)?)?;
    if cfg.json {
        return Ok(to_json(&summary));
    }
    let mut s = format!("wrote {} rows to {}\n", summary.output_rows, args.out.display());
    if summary.duplicates > 0 {
        let _ = writeln!(s, "{} duplicate headlines skipped", summary.duplicates);
    }
    for h in &summary.skipped {
        let _ = writeln!(s, "skipped (no distinct fake headline): {h}");
    }
    Ok(s)
}

pub fn baselines(cfg: &RunConfig, args: &BaselineArgs) -> Result<String, CliError> {
    let train = load_liar(&args.train)?;
    let test = args.test.as_ref().map(load_liar).transpose()?;
    let extra: Vec<Dataset> = args.eval.iter().map(load_eval).collect::<Result<_, _>>()?;
    let extra_refs: Vec<&Dataset> = extra.iter().collect();
    let config = BaselineEvalConfig { seed: cfg.seed, ..BaselineEvalConfig::default() };
    let outcome = evaluate_baselines(&train, test.as_ref(), &extra_refs, &Lexicon::default(), &config)?;
    if let Some(dir) = &args.save_dir {
        for m in &outcome.models {
            let path = dir.join(format!("{}.json", m.kind().as_str()));
            write_file(&path, &m.to_json().map_err(|e| CliError::Input(e.to_string()))?)?;
        }
    }
    let mut report = EvalReport::new(outcome.metrics.clone());
    report.dataset = Some(train.name.clone());
    if let Some(path) = &args.report {
        write_report(path, &report)?;
    }
    if cfg.json {
        return Ok(to_json(&outcome.summary()));
    }
    let mut s = format!("trained on {} rows, tested on {}\n\n", outcome.train_size, outcome.test_size);
    s.push_str(&emit_report(&report, ReportFormat::Markdown)?);
    Ok(s)
}
