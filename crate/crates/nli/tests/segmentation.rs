use veritas_nli::SentenceSplitter;

const FIXTURE: &str = include_str!("data/sentences.txt");

fn documents() -> Vec<Vec<String>> {
    FIXTURE
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split(" | ").map(|s| s.trim().to_string()).collect())
        .collect()
}

#[test]
fn fixture_has_fifty_sentences() {
    assert_eq!(documents().iter().map(Vec::len).sum::<usize>(), 50);
}

#[test]
fn splitter_matches_hand_labels() {
    let splitter = SentenceSplitter::default();
    let mut failures = Vec::new();
    for expected in documents() {
        let text = expected.join(" ");
        let got = splitter.split(&text);
        if got != expected {
            failures.push(format!("{text}\n  expected {expected:?}\n  got      {got:?}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn custom_abbreviation_list() {
    let splitter = SentenceSplitter::from_list("# none\napprox.\n");
    assert_eq!(splitter.split("It costs approx. Ten dollars."), vec!["It costs approx. Ten dollars."]);
    assert_eq!(splitter.split("Dr. Who."), vec!["Dr.", "Who."]);
}
