//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veritas_baselines::{gradient, loss, NbModel, SparseVector, TfIdfModel};
use veritas_core::{map_liar_label, BinaryLabel, PipelineKind, ScorerKind, SixWayLabel, Stage};
use veritas_eval::{agreement_analysis, Confusion, ModelPredictions};
use veritas_nli::mock::{LexicalConsistency, LexicalNli};
use veritas_nli::{
    calibrate_threshold, summac_conv_score, summac_zs_score, ConvScorerConfig, NliDistribution, PairMatrix,
};
use veritas_pipelines::{MockSlm, PipelineDepsF64, Scorers};
use veritas_retrieval::{FixtureStore, HttpTransport, Retriever, SearchProvider, Strategy};
use veritas_testkit::{
    verstappen_fixtures, StubResponse, StubServer, VERSTAPPEN_HEADLINE, VERSTAPPEN_QUESTION, VERSTAPPEN_SWAPPED,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_distribution(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let w: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
    let s = w[0] + w[1] + w[2] + 1e-12;
    let e = w[0] / s;
    let c = w[1] / s;
    [e, c, 1.0 - e - c]
}

/// Random M x N cells as raw (entail, contradict, neutral) triples, plus
/// the matrix built from them.
fn random_matrix(rng: &mut ChaCha8Rng) -> (Vec<Vec<[f64; 3]>>, PairMatrix<f64>) {
    let m = rng.gen_range(1..=6);
    let n = rng.gen_range(1..=6);
    let cells: Vec<Vec<[f64; 3]>> = (0..m).map(|_| (0..n).map(|_| random_distribution(rng)).collect()).collect();
    let rows = cells
        .iter()
        .map(|r| r.iter().map(|d| NliDistribution::new(d[0], d[1], d[2]).unwrap()).collect())
        .collect();
    (cells, PairMatrix::from_rows(rows).unwrap())
}

fn zs_oracle(cells: &[Vec<[f64; 3]>]) -> f64 {
    let n = cells[0].len();
    let mut total = 0.0;
    for j in 0..n {
        let mut best = f64::NEG_INFINITY;
        for row in cells {
            best = best.max(row[j][0] - row[j][1]);
        }
        total += best;
    }
    total / n as f64
}

fn zero_shot_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let (cells, matrix) = random_matrix(&mut rng);
        worst = worst.max((summac_zs_score(&matrix) - zs_oracle(&cells)).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!("10000 matrices, max deviation {worst:e}, {secs:.2} s"))
}

fn conv_probes() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let (cells, matrix) = random_matrix(&mut rng);
        let bins = [1usize, 2, 5, 10, 50][rng.gen_range(0..5)];
        let probe = rng.gen_range(0..bins);
        let m = cells.len() as f64;
        let n = cells[0].len();
        let mut expected = 0.0;
        for j in 0..n {
            let in_bin = cells
                .iter()
                .filter(|row| {
                    let s = row[j][0] - row[j][1];
                    let b = (((s + 1.0) / 2.0 * bins as f64).floor() as usize).min(bins - 1);
                    b == probe
                })
                .count();
            expected += in_bin as f64 / m;
        }
        expected /= n as f64;
        let one_hot = summac_conv_score(&matrix, &ConvScorerConfig::one_hot(bins, probe).unwrap());
        let uniform = summac_conv_score(&matrix, &ConvScorerConfig::uniform(bins).unwrap());
        worst = worst.max((one_hot - expected).abs()).max((uniform - 1.0 / bins as f64).abs());
    }
    ensure(worst <= 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("1000 matrices, max deviation {worst:e}"))
}

fn calibration_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..200 {
        let n = rng.gen_range(2..=60);
        let mut labels: Vec<BinaryLabel> = (0..n).map(|_| BinaryLabel::from_bool(rng.gen())).collect();
        labels[0] = BinaryLabel::Reliable;
        labels[1] = BinaryLabel::Unreliable;
        let scores: Vec<f64> = (0..n)
            .map(|_| {
                let s: f64 = rng.gen_range(-1.0..=1.0);
                if rng.gen_bool(0.3) {
                    (s * 100.0).round() / 100.0
                } else {
                    s
                }
            })
            .collect();
        // ascending scan with strict improvement keeps the smallest maximiser
        let mut best: Option<(i64, usize)> = None;
        for i in -100i64..=100 {
            let t = i as f64 / 100.0;
            let correct = scores.iter().zip(&labels).filter(|(s, l)| (**s >= t) == l.is_reliable()).count();
            if best.map_or(true, |(_, c)| correct > c) {
                best = Some((i, correct));
            }
        }
        let best = best.expect("grid is non-empty");
        let r = calibrate_threshold(&scores, &labels, 0.01).map_err(|e| format!("case {case}: {e}"))?;
        let oracle_acc = best.1 as f64 / n as f64;
        ensure(r.accuracy_at_threshold == oracle_acc, || {
            format!("case {case}: accuracy {} vs {oracle_acc}", r.accuracy_at_threshold)
        })?;
        ensure((r.threshold - best.0 as f64 / 100.0).abs() < 1e-12, || {
            format!("case {case}: threshold {} vs {}", r.threshold, best.0 as f64 / 100.0)
        })?;
    }
    let r = calibrate_threshold(&[-0.5f64, 0.5], &[BinaryLabel::Unreliable, BinaryLabel::Reliable], 0.01)
        .map_err(|e| e.to_string())?;
    ensure((r.threshold + 0.49).abs() < 1e-12, || format!("tie-break picked {}", r.threshold))?;
    Ok("200 instances match the exhaustive scan; ties resolve to the smallest threshold".into())
}

fn label_mapping() -> Outcome {
    let expected = [
        ("true", BinaryLabel::Reliable),
        ("mostly-true", BinaryLabel::Reliable),
        ("half-true", BinaryLabel::Reliable),
        ("barely-true", BinaryLabel::Unreliable),
        ("false", BinaryLabel::Unreliable),
        ("pants-fire", BinaryLabel::Unreliable),
    ];
    for (raw, want) in expected {
        let label = SixWayLabel::parse_at_row(raw, 1).map_err(|e| e.to_string())?;
        ensure(map_liar_label(label) == want, || format!("{raw} mapped to {:?}", map_liar_label(label)))?;
    }
    ensure(SixWayLabel::ALL.len() == 6, || "label alphabet is not six labels".into())?;
    Ok("6 of 6 labels".into())
}

fn bayes_oracle(docs: &[Vec<u32>], labels: &[BinaryLabel], query: &[u32]) -> (f64, f64) {
    let vocab = query.len();
    let mut post = [0.0; 2];
    for (c, class) in [BinaryLabel::Unreliable, BinaryLabel::Reliable].into_iter().enumerate() {
        let members: Vec<&Vec<u32>> = docs.iter().zip(labels).filter(|(_, y)| **y == class).map(|(d, _)| d).collect();
        let total: u32 = members.iter().map(|d| d.iter().sum::<u32>()).sum();
        let mut p = members.len() as f64 / docs.len() as f64;
        for t in 0..vocab {
            let n_t: u32 = members.iter().map(|d| d[t]).sum();
            let theta = (n_t as f64 + 1.0) / (total as f64 + vocab as f64);
            p *= theta.powi(query[t] as i32);
        }
        post[c] = p;
    }
    (post[0], post[1])
}

fn dense(v: &[u32]) -> SparseVector<f64> {
    SparseVector::from_dense(&v.iter().map(|&c| c as f64).collect::<Vec<_>>()).unwrap()
}

fn baseline_oracles() -> Outcome {
    let toks = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();
    let corpus = [toks("apple apple banana"), toks("banana cherry"), toks("cherry cherry cherry date")];
    let m = TfIdfModel::<f64>::fit(&corpus).map_err(|e| e.to_string())?;
    let idf1 = 3f64.ln();
    let idf2 = 1.5f64.ln();
    let want = [
        vec![("apple", 2.0 / 3.0 * idf1), ("banana", 1.0 / 3.0 * idf2)],
        vec![("banana", 0.5 * idf2), ("cherry", 0.5 * idf2)],
        vec![("cherry", 0.75 * idf2), ("date", 0.25 * idf1)],
    ];
    for (doc, w) in corpus.iter().zip(want) {
        let v = m.transform(doc);
        ensure(v.len() == w.len(), || "unexpected non-zero entries".into())?;
        for (tok, x) in w {
            let got = v.get(m.index_of(tok).ok_or("missing token")?);
            ensure((got - x).abs() <= 1e-9, || format!("tf-idf {tok}: {got} vs {x}"))?;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..2_000 {
        let vocab = rng.gen_range(1..=5);
        let n = rng.gen_range(2..=6);
        let docs: Vec<Vec<u32>> = (0..n).map(|_| (0..vocab).map(|_| rng.gen_range(0..4)).collect()).collect();
        let mut labels: Vec<BinaryLabel> = (0..n).map(|_| BinaryLabel::from_bool(rng.gen())).collect();
        labels[0] = BinaryLabel::Reliable;
        labels[1] = BinaryLabel::Unreliable;
        let query: Vec<u32> = (0..vocab).map(|_| rng.gen_range(0..4)).collect();
        let xs: Vec<_> = docs.iter().map(|d| dense(d)).collect();
        let nb = NbModel::train(&xs, &labels, vocab, 1.0).map_err(|e| e.to_string())?;
        let (pu, pr) = bayes_oracle(&docs, &labels, &query);
        let got = nb.posterior_reliable(&dense(&query));
        let want = pr / (pu + pr);
        ensure((got - want).abs() <= 1e-9, || format!("nb case {case}: {got} vs {want}"))?;
    }

    let mut worst = 0.0f64;
    for _ in 0..500 {
        let dim = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=8);
        let xs: Vec<_> = (0..n)
            .map(|_| SparseVector::from_dense(&(0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>()).unwrap())
            .collect();
        let ys: Vec<_> = (0..n).map(|_| BinaryLabel::from_bool(rng.gen())).collect();
        let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let b: f64 = rng.gen_range(-1.0..1.0);
        let l2 = [0.0, 1e-3, 0.1][rng.gen_range(0..3)];
        let (gw, gb) = gradient(&w, b, &xs, &ys, l2);
        let h = 1e-6;
        let rel = |num: f64, ana: f64| (num - ana).abs() / num.abs().max(ana.abs()).max(1e-3);
        for i in 0..dim {
            let mut up = w.clone();
            let mut dn = w.clone();
            up[i] += h;
            dn[i] -= h;
            let num = (loss(&up, b, &xs, &ys, l2) - loss(&dn, b, &xs, &ys, l2)) / (2.0 * h);
            worst = worst.max(rel(num, gw[i]));
        }
        let num = (loss(&w, b + h, &xs, &ys, l2) - loss(&w, b - h, &xs, &ys, l2)) / (2.0 * h);
        worst = worst.max(rel(num, gb));
    }
    ensure(worst <= 1e-5, || format!("logreg gradient relative error {worst:e}"))?;
    Ok(format!("tf-idf exact, 2000 nb corpora, logreg gradient error {worst:e}"))
}

fn fixture_retriever() -> Result<Arc<Retriever>, String> {
    let store = FixtureStore::open(verstappen_fixtures()).map_err(|e| e.to_string())?;
    Ok(Arc::new(Retriever::fixture(Arc::new(store))))
}

fn fallback_chain() -> Outcome {
    let cases = [
        (VERSTAPPEN_QUESTION, Stage::QuickAnswer),
        (VERSTAPPEN_HEADLINE, Stage::PeopleAlsoAsked),
        (VERSTAPPEN_SWAPPED, Stage::Articles),
    ];
    for (query, want) in cases {
        let mut seen = Vec::new();
        for _ in 0..2 {
            let r = fixture_retriever()?;
            let b = r.retrieve_evidence(query, Strategy::QuickAnswerChain, 3).map_err(|e| e.to_string())?;
            ensure(b.stage() == want, || format!("{query:?} stopped at {:?}", b.stage()))?;
            seen.push(b.with_scrape_seconds(0.0).map_err(|e| e.to_string())?);
        }
        ensure(seen[0] == seen[1], || format!("{query:?} is not deterministic"))?;
    }
    Ok("QuickAnswer, PeopleAlsoAsked, Articles".into())
}

fn robots_compliance() -> Outcome {
    let base = Arc::new(std::sync::OnceLock::<String>::new());
    let b = base.clone();
    let server = StubServer::start(move |_, url, _| {
        let base = b.get().cloned().unwrap_or_default();
        let page = |t: &str| StubResponse::html(format!("<html><body><h1>{t}</h1><p>{t} has a body with enough words.</p></body></html>"));
        match url {
            "/robots.txt" => StubResponse::text("User-agent: *\nDisallow: /private\n"),
            u if u.starts_with("/search?") => StubResponse::html(format!(
                "<html><body><div id=\"search\">{}</div></body></html>",
                ["/news/a", "/private/secret", "/news/b", "/private/other", "/news/c"]
                    .iter()
                    .map(|p| format!(r#"<div class="g"><a href="{base}{p}"><h3>{p}</h3></a></div>"#))
                    .collect::<String>()
            )),
            "/news/a" => page("Alpha"),
            "/news/b" => page("Beta"),
            "/news/c" => page("Gamma"),
            u if u.starts_with("/private") => page("Secret"),
            _ => StubResponse::status(404),
        }
    });
    base.set(server.base_url().to_string()).map_err(|_| "base already set")?;
    let transport = HttpTransport::new("veritas-bot/0.1", Duration::from_secs(5)).map_err(|e| e.to_string())?;
    let provider = SearchProvider::live(&server.url("/search")).map_err(|e| e.to_string())?;
    let r = Retriever::new(Box::new(transport), provider, "veritas-bot/0.1", Duration::ZERO);
    for strategy in [Strategy::ArticlesOnly, Strategy::QuickAnswerChain] {
        for k in [1, 3, 10] {
            r.retrieve_evidence("anything at all", strategy, k).map_err(|e| e.to_string())?;
        }
    }
    let paths = server.paths();
    let bad: Vec<&String> = paths.iter().filter(|p| p.starts_with("/private")).collect();
    ensure(bad.is_empty(), || format!("disallowed requests: {bad:?}"))?;
    Ok(format!("{} requests, 0 to the disallowed path", paths.len()))
}

fn hermetic_deps() -> Result<PipelineDepsF64, String> {
    let slm = MockSlm::load(&verstappen_fixtures().join("slm.json")).map_err(|e| e.to_string())?;
    Ok(PipelineDepsF64::new(fixture_retriever()?, Scorers::new(Arc::new(LexicalNli), Arc::new(LexicalConsistency)))
        .with_slm(Arc::new(slm)))
}

fn hermetic_run() -> Result<String, String> {
    let deps = hermetic_deps()?;
    let mut out = String::new();
    for pipeline in [PipelineKind::Article, PipelineKind::QuestionAnswer, PipelineKind::SlmMistral] {
        for scorer in ScorerKind::ALL {
            let run = deps.run("verstappen", VERSTAPPEN_HEADLINE, pipeline, scorer).map_err(|e| e.to_string())?;
            let rec = &run.record;
            ensure(!rec.evidence().passages().is_empty(), || format!("{pipeline}/{scorer}: empty evidence"))?;
            scorer.check_score(rec.score()).map_err(|e| e.to_string())?;
            let t = rec.timings();
            ensure(t.scrape_seconds() >= 0.0 && t.score_seconds() >= 0.0, || "negative timing".into())?;
            out.push_str(&serde_json::to_string(&run.without_timings().record).map_err(|e| e.to_string())?);
            out.push('\n');
        }
    }
    Ok(out)
}

fn hermetic_end_to_end() -> Outcome {
    let start = Instant::now();
    let first = hermetic_run()?;
    let secs = start.elapsed().as_secs_f64();
    let second = hermetic_run()?;
    ensure(first.lines().count() == 9, || format!("{} records", first.lines().count()))?;
    ensure(first == second, || "runs differ".into())?;
    ensure(secs < 10.0, || format!("took {secs:.2} s"))?;
    Ok(format!("9 records, byte-identical, {secs:.2} s"))
}

fn metrics_and_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..10_000 {
        let c = Confusion {
            tp: rng.gen_range(0..50),
            fp: rng.gen_range(0..50),
            fn_: rng.gen_range(0..50),
            tn: rng.gen_range(0..50),
        };
        if c.total() == 0 {
            continue;
        }
        let r = c.rates::<f64>();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        ensure(close(r.accuracy, (c.tp + c.tn) as f64 / c.total() as f64), || format!("case {case}: accuracy"))?;
        ensure(r.precision_undefined == (c.tp + c.fp == 0), || format!("case {case}: precision flag"))?;
        ensure(r.recall_undefined == (c.tp + c.fn_ == 0), || format!("case {case}: recall flag"))?;
        if !r.precision_undefined {
            ensure(close(r.precision * (c.tp + c.fp) as f64, c.tp as f64), || format!("case {case}: precision"))?;
        }
        if !r.recall_undefined {
            ensure(close(r.recall * (c.tp + c.fn_) as f64, c.tp as f64), || format!("case {case}: recall"))?;
        }
        let f1 = if c.tp == 0 { 0.0 } else { 2.0 * c.tp as f64 / (2 * c.tp + c.fp + c.fn_) as f64 };
        ensure(close(r.f1, f1), || format!("case {case}: f1 {} vs {f1}", r.f1))?;
        ensure([r.accuracy, r.precision, r.recall, r.f1].iter().all(|x| (0.0..=1.0).contains(x)), || {
            format!("case {case}: out of range")
        })?;
    }

    let mut checked = 0;
    for case in 0..300 {
        let k = 2 + case % 3;
        let n = rng.gen_range(1..40);
        let ids: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let labels: BTreeMap<String, BinaryLabel> =
            ids.iter().map(|id| (id.clone(), BinaryLabel::from_bool(rng.gen()))).collect();
        let models: Vec<ModelPredictions> = (0..k)
            .map(|m| ModelPredictions::new(format!("m{m}"), ids.iter().map(|id| (id.clone(), BinaryLabel::from_bool(rng.gen())))))
            .collect();
        let rep = agreement_analysis(&models, &labels).map_err(|e| e.to_string())?;
        ensure(rep.regions.len() == (1 << k) - 1, || format!("case {case}: {} regions", rep.regions.len()))?;
        let right = |m: &ModelPredictions, id: &String| m.predictions[id] == labels[id];
        let none_right = ids.iter().filter(|id| models.iter().all(|m| !right(m, id))).count();
        let all_right = ids.iter().filter(|id| models.iter().all(|m| right(m, id))).count();
        let sum_correct: usize = rep.regions.iter().map(|r| r.correct).sum();
        let sum_incorrect: usize = rep.regions.iter().map(|r| r.incorrect).sum();
        ensure(sum_correct + none_right == n, || format!("case {case}: correct regions sum to {sum_correct}"))?;
        ensure(sum_incorrect + all_right == n, || format!("case {case}: incorrect regions sum to {sum_incorrect}"))?;
        for (i, m) in models.iter().enumerate() {
            let pm = &rep.per_model[i];
            let correct = ids.iter().filter(|id| right(m, id)).count();
            ensure(pm.correct.len() == correct && pm.incorrect.len() == n - correct, || format!("case {case}: per-model counts"))?;
            let from_regions: usize = rep.regions.iter().filter(|r| r.models.contains(&m.model)).map(|r| r.correct).sum();
            ensure(from_regions == correct, || format!("case {case}: regions containing {} hold {from_regions}", m.model))?;
            let solo = rep.region(&[m.model.as_str()]).ok_or("missing singleton region")?;
            ensure(solo.correct == pm.unique_correct.len(), || format!("case {case}: unique correct"))?;
        }
        checked += 1;
    }
    Ok(format!("10000 confusions, {checked} agreement sets of 2 to 4 models"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("zero-shot reduction matches brute-force oracle", zero_shot_oracle),
        ("convolution one-hot and uniform probes", conv_probes),
        ("calibration optimality and tie-break", calibration_optimality),
        ("six-way label mapping", label_mapping),
        ("tf-idf, naive bayes and logistic regression oracles", baseline_oracles),
        ("question-answer fallback chain stages", fallback_chain),
        ("robots.txt compliance", robots_compliance),
        ("hermetic end-to-end runs", hermetic_end_to_end),
        ("metrics identities and agreement regions", metrics_and_agreement),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
