use std::collections::BTreeMap;

use serde::Serialize;
use tracing::warn;
use veritas_core::{PipelineKind, Scalar, ScorerKind};

/// What a timing sample measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimedStage {
    Scrape,
    Score(ScorerKind),
}

impl TimedStage {
    pub fn label(self) -> &'static str {
        match self {
            TimedStage::Scrape => "scrape",
            TimedStage::Score(s) => s.as_str(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingSample {
    pub pipeline: PipelineKind,
    pub stage: TimedStage,
    pub seconds: f64,
}

/// Quantile by linear interpolation between order statistics (type 7).
/// `sorted` must be non-empty and ascending.
pub fn quantile_type7<T: Scalar>(sorted: &[T], p: T) -> T {
    let n = sorted.len();
    assert!(n > 0, "quantile of an empty sample");
    let h = T::from_count(n - 1) * p;
    let lo = h.floor();
    let i = lo.to_usize().unwrap_or(0).min(n - 1);
    let j = (i + 1).min(n - 1);
    sorted[i] + (h - lo) * (sorted[j] - sorted[i])
}

/// Box-plot summary. Whiskers end at the most extreme samples inside the
/// 1.5 IQR fences, never inside the box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct BoxStats<T: Scalar> {
    pub count: usize,
    pub mean: T,
    pub min: T,
    pub q1: T,
    pub median: T,
    pub q3: T,
    pub max: T,
    pub lower_fence: T,
    pub upper_fence: T,
    pub lower_whisker: T,
    pub upper_whisker: T,
    pub outliers: usize,
}

pub fn box_stats<T: Scalar>(samples: &[T]) -> Option<BoxStats<T>> {
    if samples.is_empty() {
        return None;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("timing samples are finite"));
    let q = |p: f64| quantile_type7(&sorted, T::lit(p));
    let (q1, median, q3) = (q(0.25), q(0.5), q(0.75));
    let reach = T::lit(1.5) * (q3 - q1);
    let (lower_fence, upper_fence) = (q1 - reach, q3 + reach);
    let inside = sorted.iter().copied().filter(|&x| x >= lower_fence && x <= upper_fence);
    let lower_whisker = inside.clone().next().map_or(q1, |x| x.min(q1));
    let upper_whisker = inside.last().map_or(q3, |x| x.max(q3));
    let sum: T = sorted.iter().copied().sum();
    Some(BoxStats {
        count: sorted.len(),
        mean: sum / T::from_count(sorted.len()),
        min: sorted[0],
        q1,
        median,
        q3,
        max: sorted[sorted.len() - 1],
        lower_fence,
        upper_fence,
        lower_whisker,
        upper_whisker,
        outliers: sorted.iter().filter(|&&x| x < lower_fence || x > upper_fence).count(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageStats {
    pub pipeline: PipelineKind,
    pub stage: TimedStage,
    pub stats: BoxStats<f64>,
}

/// Mean scrape time, mean time per scorer, and their sums for one
/// pipeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineTimingRow {
    pub pipeline: PipelineKind,
    pub scrape_mean: f64,
    pub score_means: BTreeMap<ScorerKind, f64>,
    pub totals: BTreeMap<ScorerKind, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingReport {
    pub stages: Vec<StageStats>,
    pub rows: Vec<PipelineTimingRow>,
}

/// Groups samples by (pipeline, stage). Stages without samples are left
/// out; a pipeline row needs scrape samples.
pub fn timing_stats(samples: &[TimingSample]) -> TimingReport {
    let mut groups: BTreeMap<(PipelineKind, TimedStage), Vec<f64>> = BTreeMap::new();
    for s in samples {
        groups.entry((s.pipeline, s.stage)).or_default().push(s.seconds);
    }
    let stages: Vec<StageStats> = groups
        .iter()
        .filter_map(|(&(pipeline, stage), xs)| box_stats(xs).map(|stats| StageStats { pipeline, stage, stats }))
        .collect();
    let mut rows = Vec::new();
    for pipeline in PipelineKind::ALL {
        let mean_of = |stage| stages.iter().find(|s| s.pipeline == pipeline && s.stage == stage).map(|s| s.stats.mean);
        let Some(scrape_mean) = mean_of(TimedStage::Scrape) else {
            if stages.iter().any(|s| s.pipeline == pipeline) {
                warn!(pipeline = %pipeline, "no scrape samples, pipeline row omitted");
            }
            continue;
        };
        let score_means: BTreeMap<ScorerKind, f64> =
            ScorerKind::ALL.iter().filter_map(|&k| mean_of(TimedStage::Score(k)).map(|m| (k, m))).collect();
        let totals = score_means.iter().map(|(&k, &m)| (k, scrape_mean + m)).collect();
        rows.push(PipelineTimingRow { pipeline, scrape_mean, score_means, totals });
    }
    TimingReport { stages, rows }
}

/// Long-format `pipeline,stage,seconds` export.
pub fn samples_csv(samples: &[TimingSample]) -> String {
    let mut out = String::from("pipeline,stage,seconds\n");
    for s in samples {
        out.push_str(&format!("{},{},{}\n", s.pipeline.as_str(), s.stage.label(), s.seconds));
    }
    out
}
