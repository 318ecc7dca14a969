use std::sync::Arc;
use std::thread;

use veritas_core::{BinaryLabel, PipelineKind, ScorerKind, Stage};
use veritas_nli::mock::{ConstantConsistency, ConstantNli, LexicalConsistency, LexicalNli};
use veritas_pipelines::{
    EchoSlm, EvidenceCache, MockSlm, PipelineDepsF64, PipelineError, Scorers, ScriptedSlm, SlmKind,
};
use veritas_retrieval::{FixtureStore, Retriever};
use veritas_testkit::{verstappen_fixtures, GUARDIAN_URL, VERSTAPPEN_HEADLINE, VERSTAPPEN_QUESTION, VERSTAPPEN_SWAPPED};

fn retriever() -> Arc<Retriever> {
    Arc::new(Retriever::fixture(Arc::new(FixtureStore::open(verstappen_fixtures()).unwrap())))
}

fn lexical_deps() -> PipelineDepsF64 {
    let slm = MockSlm::load(&verstappen_fixtures().join("slm.json")).unwrap();
    PipelineDepsF64::new(retriever(), Scorers::new(Arc::new(LexicalNli), Arc::new(LexicalConsistency)))
        .with_slm(Arc::new(slm))
}

fn constant_deps() -> PipelineDepsF64 {
    PipelineDepsF64::new(retriever(), Scorers::new(Arc::new(ConstantNli::entailing()), Arc::new(ConstantConsistency(1.0))))
}

#[test]
fn question_answer_on_the_question_uses_quick_answer() {
    let out = lexical_deps().run_question_answer("c1", VERSTAPPEN_QUESTION, ScorerKind::SummacZs).unwrap();
    assert_eq!(out.explanation.stage(), Stage::QuickAnswer);
    assert_eq!(out.explanation.premise(), "Max Verstappen");
}

#[test]
fn question_answer_on_the_headline_falls_back_to_paa() {
    let out = lexical_deps().run_question_answer("c1", VERSTAPPEN_HEADLINE, ScorerKind::SummacZs).unwrap();
    assert_eq!(out.explanation.stage(), Stage::PeopleAlsoAsked);
}

#[test]
fn question_answer_terminates_in_articles() {
    let out = lexical_deps().run_question_answer("c1", VERSTAPPEN_SWAPPED, ScorerKind::SummacZs).unwrap();
    assert_eq!(out.explanation.stage(), Stage::Articles);
}

#[test]
fn slm_pipeline_uses_the_generated_question() {
    let out = lexical_deps().run_slm("c1", VERSTAPPEN_HEADLINE, SlmKind::Phi3, ScorerKind::SummacZs).unwrap();
    assert_eq!(out.explanation.generated_question(), Some(VERSTAPPEN_QUESTION));
    assert!(!out.explanation.question_fallback());
    assert_eq!(out.explanation.stage(), Stage::QuickAnswer);
    assert_eq!(out.explanation.premise(), "Max Verstappen");
    assert_eq!(out.record.pipeline(), PipelineKind::SlmPhi3);
    assert_eq!(out.record.verdict(), BinaryLabel::Reliable);
}

#[test]
fn article_pipeline_reads_guardian_first() {
    let out = lexical_deps().run_article("c1", VERSTAPPEN_HEADLINE, ScorerKind::SummacZs).unwrap();
    assert_eq!(out.explanation.stage(), Stage::Articles);
    assert_eq!(out.explanation.source_urls()[0], GUARDIAN_URL);
    assert!(out.explanation.premise().starts_with("Max Verstappen crowned Formula One world champion\n"));
    assert_eq!(out.record.verdict(), BinaryLabel::Reliable);
}

#[test]
fn constant_entailment_gives_reliable_with_score_one() {
    let out = constant_deps().run_question_answer("c1", VERSTAPPEN_QUESTION, ScorerKind::SummacZs).unwrap();
    assert_eq!(out.record.evidence().passages().len(), 1);
    assert_eq!(out.record.score(), 1.0);
    assert_eq!(out.record.verdict(), BinaryLabel::Reliable);
    let out = constant_deps().run_article("c1", VERSTAPPEN_HEADLINE, ScorerKind::FactCc).unwrap();
    assert_eq!(out.record.score(), 1.0);
    assert_eq!(out.record.threshold(), 0.5);
}

#[test]
fn empty_fixture_set_is_no_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(FixtureStore::create(dir.path()).unwrap());
    let deps = PipelineDepsF64::new(
        Arc::new(Retriever::fixture(store)),
        Scorers::new(Arc::new(LexicalNli), Arc::new(LexicalConsistency)),
    );
    for pipeline in [PipelineKind::Article, PipelineKind::QuestionAnswer] {
        let err = deps.run("c1", VERSTAPPEN_HEADLINE, pipeline, ScorerKind::SummacZs).unwrap_err();
        assert!(err.is_no_evidence(), "{err}");
        assert!(matches!(err, PipelineError::NoEvidence { pipeline: p, .. } if p == pipeline));
    }
}

#[test]
fn slm_failure_degrades_to_headline_query() {
    let deps = lexical_deps().with_slm(Arc::new(ScriptedSlm::failing("sidecar down")));
    let out = deps.run_slm("c1", VERSTAPPEN_HEADLINE, SlmKind::Mistral, ScorerKind::SummacZs).unwrap();
    assert!(out.explanation.question_fallback());
    assert_eq!(out.explanation.generated_question(), None);
    assert_eq!(out.record.evidence().query(), VERSTAPPEN_HEADLINE);
    let qa = lexical_deps().run_question_answer("c1", VERSTAPPEN_HEADLINE, ScorerKind::SummacZs).unwrap();
    assert_eq!(out.record.evidence().passages(), qa.record.evidence().passages());
}

#[test]
fn question_without_mark_degrades_too() {
    let deps = lexical_deps().with_slm(Arc::new(ScriptedSlm::replying("no idea")));
    let out = deps.run_slm("c1", VERSTAPPEN_HEADLINE, SlmKind::Phi3, ScorerKind::SummacZs).unwrap();
    assert!(out.explanation.question_fallback());
}

#[test]
fn missing_slm_is_an_error() {
    let err = constant_deps().run_slm("c1", VERSTAPPEN_HEADLINE, SlmKind::Phi3, ScorerKind::SummacZs).unwrap_err();
    assert_eq!(err, PipelineError::MissingSlm(PipelineKind::SlmPhi3));
}

#[test]
fn echoed_question_matches_question_answer_evidence() {
    let deps = lexical_deps().with_slm(Arc::new(ScriptedSlm::replying(VERSTAPPEN_QUESTION)));
    let slm = deps.gather(VERSTAPPEN_HEADLINE, PipelineKind::SlmMistral).unwrap();
    let qa = deps.gather(VERSTAPPEN_QUESTION, PipelineKind::QuestionAnswer).unwrap();
    let zero = |b: &veritas_core::EvidenceBundle| b.clone().with_scrape_seconds(0.0).unwrap();
    assert_eq!(zero(&slm.bundle), zero(&qa.bundle));
    assert_eq!(slm.premise, qa.premise);
}

#[test]
fn echo_slm_on_a_question_headline_matches_question_answer() {
    let deps = lexical_deps().with_slm(Arc::new(EchoSlm));
    let slm = deps.gather(VERSTAPPEN_QUESTION, PipelineKind::SlmPhi3).unwrap();
    let qa = deps.gather(VERSTAPPEN_QUESTION, PipelineKind::QuestionAnswer).unwrap();
    assert_eq!(slm.generated_question.as_deref(), Some(VERSTAPPEN_QUESTION));
    assert_eq!(slm.bundle.passages(), qa.bundle.passages());
    assert_eq!(slm.bundle.stage(), qa.bundle.stage());
}

#[test]
fn explanation_carries_sources_and_premise() {
    let deps = lexical_deps();
    for pipeline in PipelineKind::ALL {
        for scorer in ScorerKind::ALL {
            let out = deps.run("c1", VERSTAPPEN_HEADLINE, pipeline, scorer).unwrap();
            let e = &out.explanation;
            assert!(!e.source_urls().is_empty());
            assert!(!e.premise().is_empty());
            for p in e.evidence().passages() {
                assert!(e.source_urls().contains(&p.source_url));
            }
            let json = serde_json::to_value(e).unwrap();
            assert_eq!(json["premise"], e.premise());
            let t = out.record.timings();
            assert_eq!(t.scrape_seconds(), out.record.evidence().scrape_seconds());
        }
    }
}

fn all_runs(deps: &PipelineDepsF64) -> Vec<String> {
    let mut out = Vec::new();
    for pipeline in PipelineKind::ALL {
        for scorer in ScorerKind::ALL {
            let o = deps.run("c1", VERSTAPPEN_HEADLINE, pipeline, scorer).unwrap();
            out.push(serde_json::to_string(&o.without_timings()).unwrap());
        }
    }
    out
}

#[test]
fn runs_are_independent_of_order_and_concurrency() {
    let deps = lexical_deps();
    let sequential = all_runs(&deps);
    let mut reversed = Vec::new();
    for pipeline in PipelineKind::ALL.iter().rev() {
        for scorer in ScorerKind::ALL {
            let o = deps.run("c1", VERSTAPPEN_HEADLINE, *pipeline, scorer).unwrap();
            reversed.push(serde_json::to_string(&o.without_timings()).unwrap());
        }
    }
    reversed.reverse();
    let mut seq_by_pipeline = sequential.clone();
    for chunk in seq_by_pipeline.chunks_mut(3) {
        chunk.reverse();
    }
    assert_eq!(reversed, seq_by_pipeline);

    let concurrent: Vec<String> = thread::scope(|s| {
        let handles: Vec<_> = PipelineKind::ALL
            .iter()
            .flat_map(|p| ScorerKind::ALL.iter().map(move |sc| (*p, *sc)))
            .map(|(p, sc)| {
                let deps = deps.clone();
                s.spawn(move || {
                    let o = deps.run("c1", VERSTAPPEN_HEADLINE, p, sc).unwrap();
                    serde_json::to_string(&o.without_timings()).unwrap()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(concurrent, sequential);
}

#[test]
fn cache_shares_scrapes_between_scorers() {
    let cache = Arc::new(EvidenceCache::new());
    let deps = lexical_deps().with_cache(cache.clone());
    let cached = all_runs(&deps);
    assert_eq!(cache.len(), 3);
    assert_eq!(cached, all_runs(&lexical_deps()));
}
