use std::fmt::Write as _;

use veritas_core::{PipelineKind, Stage};
use veritas_eval::{pipeline_display, scorer_display};
use veritas_pipelines::PipelineOutput;

pub fn pipeline_name(p: PipelineKind) -> &'static str {
    pipeline_display(p)
}

pub fn stage_name(s: Stage) -> &'static str {
    match s {
        Stage::QuickAnswer => "quick answer",
        Stage::PeopleAlsoAsked => "people also asked",
        Stage::Articles => "top articles",
    }
}

/// Human-readable verdict with the evidence trail.
pub fn render_verdict(out: &PipelineOutput) -> String {
    let r = &out.record;
    let e = &out.explanation;
    let mut s = String::new();
    let _ = writeln!(s, "Verdict:   {}", r.verdict().name());
    let _ = writeln!(s, "Score:     {:.4} ({}, threshold {:.2})", r.score(), scorer_display(r.scorer()), r.threshold());
    let _ = writeln!(s, "Pipeline:  {}", pipeline_name(r.pipeline()));
    let _ = writeln!(s, "Stage:     {}", stage_name(e.stage()));
    if e.question_fallback() {
        let _ = writeln!(s, "Question:  generation failed, searched the headline instead");
    } else if let Some(q) = e.generated_question() {
        let _ = writeln!(s, "Question:  {q}");
    }
    let _ = writeln!(s, "Sources:");
    for (i, url) in e.source_urls().iter().enumerate() {
        let _ = writeln!(s, "  {}. {url}", i + 1);
    }
    let t = r.timings();
    let _ = writeln!(s, "Time:      {:.2} s retrieval, {:.2} s scoring", t.scrape_seconds(), t.score_seconds());
    s
}
