use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use veritas_core::{PipelineKind, ScorerKind};

use crate::agreement::AgreementReport;
use crate::calibrate::ThresholdEntry;
use crate::error::EvalError;
use crate::metrics::{pipeline_display, scorer_display, MetricsReport};
use crate::timing::TimingReport;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const POSITIVE_CLASS: &str = "Reliable";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(EvalError::UnknownFormat(s.to_string())),
        }
    }
}

impl ReportFormat {
    /// Guesses the format from a file extension, defaulting to JSON.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => ReportFormat::Csv,
            Some("md") | Some("markdown") => ReportFormat::Markdown,
            _ => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSummary {
    pub seed: u64,
    pub calibration_fraction: f64,
    pub calibration_size: usize,
    pub reporting_size: usize,
    pub calibration_ids: Vec<String>,
}

/// Everything an evaluation produced. Field order is the serialized order.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct EvalReport {
    pub schema_version: u32,
    pub positive_class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub calibration: Vec<ThresholdEntry>,
    pub metrics: Vec<MetricsReport>,
    pub agreement: Vec<AgreementReport>,
    pub timing: Option<TimingReport>,
}

impl EvalReport {
    pub fn new(metrics: Vec<MetricsReport>) -> Self {
        EvalReport {
            schema_version: REPORT_SCHEMA_VERSION,
            positive_class: POSITIVE_CLASS.to_string(),
            metrics,
            ..Default::default()
        }
    }
}

pub fn emit_report(report: &EvalReport, format: ReportFormat) -> Result<String, EvalError> {
    if report.metrics.is_empty() {
        return Err(EvalError::Empty("report metrics".into()));
    }
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        ReportFormat::Csv => metrics_csv(&report.metrics),
        ReportFormat::Markdown => Ok(markdown(report)),
    }
}

const CSV_HEADER: [&str; 12] =
    ["model", "pipeline", "scorer", "split", "tp", "fp", "fn", "tn", "accuracy", "precision", "recall", "f1"];

pub fn metrics_csv(metrics: &[MetricsReport]) -> Result<String, EvalError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| EvalError::format("csv report", e);
    w.write_record(CSV_HEADER).map_err(fail)?;
    for m in metrics {
        let c = m.confusion;
        w.write_record([
            m.model.clone(),
            m.pipeline.map(|p| p.as_str().to_string()).unwrap_or_default(),
            m.scorer.map(|s| s.as_str().to_string()).unwrap_or_default(),
            m.split.clone(),
            c.tp.to_string(),
            c.fp.to_string(),
            c.fn_.to_string(),
            c.tn.to_string(),
            m.accuracy.to_string(),
            m.precision.to_string(),
            m.recall.to_string(),
            m.f1.to_string(),
        ])
        .map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| EvalError::format("csv report", e))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

/// Reads back the output of [`metrics_csv`]. Undefined-denominator flags
/// are recomputed from the confusion counts.
pub fn parse_metrics_csv(text: &str) -> Result<Vec<MetricsReport>, EvalError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| EvalError::format("csv report", e))?.clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(EvalError::format("csv report", "unexpected header"));
    }
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row_err = |m: String| EvalError::Row { name: "csv report".into(), row: i + 1, message: m };
        let row = row.map_err(|e| row_err(e.to_string()))?;
        let count = |c: usize| row[c].parse::<usize>().map_err(|e| row_err(e.to_string()));
        let real = |c: usize| row[c].parse::<f64>().map_err(|e| row_err(e.to_string()));
        let confusion = crate::metrics::Confusion { tp: count(4)?, fp: count(5)?, fn_: count(6)?, tn: count(7)? };
        let mut m = MetricsReport::from_confusion(&row[0], &row[3], confusion);
        m.pipeline = (!row[1].is_empty()).then(|| row[1].parse()).transpose().map_err(row_err)?;
        m.scorer = (!row[2].is_empty()).then(|| row[2].parse()).transpose().map_err(row_err)?;
        m.accuracy = real(8)?;
        m.precision = real(9)?;
        m.recall = real(10)?;
        m.f1 = real(11)?;
        out.push(m);
    }
    Ok(out)
}

fn pct(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

fn two(x: f64) -> String {
    format!("{x:.2}")
}

fn markdown(report: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Evaluation report\n");
    let _ = writeln!(s, "Positive class: {}\n", report.positive_class);
    if let Some(d) = &report.dataset {
        let _ = writeln!(s, "Dataset: {d}\n");
    }
    if let Some(sp) = &report.split {
        let _ = writeln!(
            s,
            "Calibration split: {} rows ({:.0}%, seed {}); metrics below are on the remaining {} rows.\n",
            sp.calibration_size,
            sp.calibration_fraction * 100.0,
            sp.seed,
            sp.reporting_size
        );
    }

    let pipelined: Vec<&MetricsReport> = report.metrics.iter().filter(|m| m.pipeline.is_some()).collect();
    if !pipelined.is_empty() {
        let scorers: Vec<ScorerKind> =
            ScorerKind::ALL.into_iter().filter(|k| pipelined.iter().any(|m| m.scorer == Some(*k))).collect();
        let _ = writeln!(s, "## Pipelines\n");
        let head: Vec<&str> = scorers.iter().map(|k| scorer_display(*k)).collect();
        let _ = writeln!(s, "| Pipeline | Metric | {} |", head.join(" | "));
        let _ = writeln!(s, "|---|---|{}", "---|".repeat(scorers.len()));
        for p in PipelineKind::ALL {
            if !pipelined.iter().any(|m| m.pipeline == Some(p)) {
                continue;
            }
            let rows: [(&str, fn(&MetricsReport) -> String); 4] = [
                ("Precision", |m| two(m.precision)),
                ("Recall", |m| two(m.recall)),
                ("F1", |m| two(m.f1)),
                ("Accuracy", |m| pct(m.accuracy)),
            ];
            for (i, (name, f)) in rows.iter().enumerate() {
                let cells: Vec<String> = scorers
                    .iter()
                    .map(|k| {
                        pipelined
                            .iter()
                            .find(|m| m.pipeline == Some(p) && m.scorer == Some(*k))
                            .map(|m| f(m))
                            .unwrap_or_else(|| "-".into())
                    })
                    .collect();
                let label = if i == 0 { pipeline_display(p) } else { "" };
                let _ = writeln!(s, "| {label} | {name} | {} |", cells.join(" | "));
            }
        }
        s.push('\n');
    }

    let others: Vec<&MetricsReport> = report.metrics.iter().filter(|m| m.pipeline.is_none()).collect();
    if !others.is_empty() {
        let _ = writeln!(s, "## Models\n");
        let _ = writeln!(s, "| Model | Split | Accuracy | Precision | Recall | F1 |");
        let _ = writeln!(s, "|---|---|---|---|---|---|");
        for m in others {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                m.model,
                m.split,
                pct(m.accuracy),
                two(m.precision),
                two(m.recall),
                two(m.f1)
            );
        }
        s.push('\n');
    }

    let flagged: Vec<&MetricsReport> =
        report.metrics.iter().filter(|m| m.precision_undefined || m.recall_undefined).collect();
    for m in flagged {
        let _ = writeln!(s, "Note: {} has an empty denominator; the undefined metric is reported as 0.\n", m.model);
    }

    for a in &report.agreement {
        let _ = writeln!(s, "## Agreement: {}\n", a.models.join(", "));
        let _ = writeln!(s, "| Model | Correct | Incorrect | Unique correct | Unique incorrect |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        for m in &a.per_model {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                m.model,
                m.correct.len(),
                m.incorrect.len(),
                m.unique_correct.len(),
                m.unique_incorrect.len()
            );
        }
        s.push('\n');
    }

    if let Some(t) = &report.timing {
        if !t.rows.is_empty() {
            let _ = writeln!(s, "## Mean times (s)\n");
            let _ = writeln!(
                s,
                "| Pipeline | Scrape | FactCC | SummaC-ZS | SummaC-Conv | Scrape + FactCC | Scrape + SummaC-ZS | Scrape + SummaC-Conv |"
            );
            let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
            for r in &t.rows {
                let cell = |v: Option<&f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
                let means: Vec<String> = ScorerKind::ALL.iter().map(|k| cell(r.score_means.get(k))).collect();
                let totals: Vec<String> = ScorerKind::ALL.iter().map(|k| cell(r.totals.get(k))).collect();
                let _ = writeln!(
                    s,
                    "| {} | {:.4} | {} | {} |",
                    pipeline_display(r.pipeline),
                    r.scrape_mean,
                    means.join(" | "),
                    totals.join(" | ")
                );
            }
            s.push('\n');
        }
    }
    s
}
