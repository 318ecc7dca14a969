use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tracing::warn;
use veritas_core::{BinaryLabel, ClaimRecord, SixWayLabel};

use crate::error::EvalError;

/// Share of malformed LIAR rows above which loading fails.
pub const MAX_MALFORMED_FRACTION: f64 = 0.05;

const EVAL_COLUMNS: [&str; 4] = ["headline", "label", "source", "domain"];
const OFFENDERS_SHOWN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceFormat {
    LiarTsv,
    EvalCsv,
}

/// Labelled claims with unique ids, in file order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub name: String,
    pub source_format: SourceFormat,
    pub records: Vec<ClaimRecord>,
    /// Rows skipped while loading, as "row N: reason".
    pub skipped: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn labels(&self) -> Vec<BinaryLabel> {
        self.records.iter().map(|r| r.label.expect("dataset records are labelled")).collect()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.records.iter().map(|r| r.id.as_str()).collect()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.records.iter().map(|r| r.text.as_str()).collect()
    }

    /// Records at `indices`, in the given order.
    pub fn subset(&self, name: &str, indices: &[usize]) -> Dataset {
        Dataset {
            name: name.to_string(),
            source_format: self.source_format,
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            skipped: Vec::new(),
        }
    }
}

fn read(path: &Path) -> Result<String, EvalError> {
    fs::read_to_string(path).map_err(|e| EvalError::io(path, e))
}

fn name_of(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

pub fn load_liar(path: impl AsRef<Path>) -> Result<Dataset, EvalError> {
    let path = path.as_ref();
    parse_liar(&read(path)?, &name_of(path))
}

/// Parses a LIAR tab-separated file: id, six-way label, statement, then
/// metadata columns that are ignored. Malformed rows are skipped unless
/// they exceed [`MAX_MALFORMED_FRACTION`].
pub fn parse_liar(text: &str, name: &str) -> Result<Dataset, EvalError> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut seen = HashSet::new();
    let mut total = 0usize;
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        total += 1;
        let parsed = row.map_err(|e| e.to_string()).and_then(|r| liar_record(&r, row_no));
        match parsed {
            Ok(rec) if seen.insert(rec.id.clone()) => records.push(rec),
            Ok(rec) => skipped.push(format!("row {row_no}: duplicate id {:?}", rec.id)),
            Err(reason) => skipped.push(format!("row {row_no}: {reason}")),
        }
    }
    if total == 0 {
        return Err(EvalError::Empty(name.to_string()));
    }
    if skipped.len() as f64 > MAX_MALFORMED_FRACTION * total as f64 {
        return Err(EvalError::TooManyMalformed {
            name: name.to_string(),
            malformed: skipped.len(),
            total,
            first: skipped.iter().take(OFFENDERS_SHOWN).cloned().collect(),
        });
    }
    for s in &skipped {
        warn!(dataset = name, "skipped {s}");
    }
    Ok(Dataset { name: name.to_string(), source_format: SourceFormat::LiarTsv, records, skipped })
}

fn liar_record(row: &csv::StringRecord, row_no: usize) -> Result<ClaimRecord, String> {
    if row.len() < 3 {
        return Err(format!("{} columns, expected at least 3", row.len()));
    }
    let raw = SixWayLabel::parse_at_row(&row[1], row_no).map_err(|e| e.to_string())?;
    let id = match row[0].trim() {
        "" => format!("liar-{row_no}"),
        id => id.to_string(),
    };
    let rec = ClaimRecord::new(id, row[2].trim()).map_err(|e| e.to_string())?;
    Ok(rec.with_raw_label(raw))
}

pub fn load_eval(path: impl AsRef<Path>) -> Result<Dataset, EvalError> {
    let path = path.as_ref();
    parse_eval(&read(path)?, &name_of(path))
}

/// Parses the evaluation CSV (`headline,label,source,domain`, optional
/// `id`). Rows without an id get `row-N`. Every row must parse.
pub fn parse_eval(text: &str, name: &str) -> Result<Dataset, EvalError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| EvalError::format(name, e))?
        .iter()
        .map(|h| h.trim().to_lowercase())
        .collect();
    let col = |c: &str| headers.iter().position(|h| h == c);
    let missing: Vec<String> = EVAL_COLUMNS.iter().filter(|c| col(c).is_none()).map(|c| c.to_string()).collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingColumns { name: name.to_string(), missing });
    }
    let [headline, label, source, domain] = EVAL_COLUMNS.map(|c| col(c).unwrap());
    let id_col = col("id");
    let row_err = |row: usize, message: String| EvalError::Row { name: name.to_string(), row, message };

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| row_err(row_no, e.to_string()))?;
        let get = |c: usize| row.get(c).unwrap_or("");
        let id = match id_col.map(get) {
            Some(id) if !id.is_empty() => id.to_string(),
            _ => format!("row-{row_no}"),
        };
        if !seen.insert(id.clone()) {
            return Err(EvalError::DuplicateId { name: name.to_string(), id, row: row_no });
        }
        let lab: BinaryLabel = get(label).parse().map_err(|e: veritas_core::CoreError| row_err(row_no, e.to_string()))?;
        let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
        let rec = ClaimRecord::new(id, get(headline))
            .and_then(|r| r.with_label(lab))
            .map_err(|e| row_err(row_no, e.to_string()))?
            .with_source(opt(get(source)))
            .with_domain_tag(opt(get(domain)));
        records.push(rec);
    }
    if records.is_empty() {
        return Err(EvalError::Empty(name.to_string()));
    }
    Ok(Dataset { name: name.to_string(), source_format: SourceFormat::EvalCsv, records, skipped: Vec::new() })
}

/// Renders records in the evaluation CSV layout with an `id` column.
pub fn write_eval_csv(records: &[ClaimRecord]) -> Result<String, EvalError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| EvalError::format("csv output", e);
    w.write_record(["id", "headline", "label", "source", "domain"]).map_err(fail)?;
    for r in records {
        let label = r.label.map(|l| l.as_str()).unwrap_or("");
        w.write_record([
            r.id.as_str(),
            r.text.as_str(),
            label,
            r.source.as_deref().unwrap_or(""),
            r.domain_tag.as_deref().unwrap_or(""),
        ])
        .map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| EvalError::format("csv output", e))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}
