use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use veritas_core::text::normalize_whitespace;
use veritas_nli::wire::{SlmRequest, SlmResponse, SlmTask, SLM_GENERATE_PATH};
use veritas_nli::{BackendError, SidecarClient};

pub const SLM_TEMPERATURE: f64 = 0.0;
pub const SLM_MAX_NEW_TOKENS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlmKind {
    Mistral,
    Phi3,
}

impl SlmKind {
    pub const ALL: [SlmKind; 2] = [SlmKind::Mistral, SlmKind::Phi3];

    pub fn as_str(self) -> &'static str {
        match self {
            SlmKind::Mistral => "mistral",
            SlmKind::Phi3 => "phi3",
        }
    }

    /// Model identifier sent to the sidecar.
    pub fn model_id(self) -> &'static str {
        match self {
            SlmKind::Mistral => "mistralai/Mistral-7B-Instruct-v0.3",
            SlmKind::Phi3 => "microsoft/Phi-3-mini-4k-instruct",
        }
    }
}

impl fmt::Display for SlmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SlmKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mistral" => Ok(SlmKind::Mistral),
            "phi3" | "phi-3" => Ok(SlmKind::Phi3),
            other => Err(format!("unknown language model {other:?}")),
        }
    }
}

/// Text generator behind the question and fake-headline steps.
pub trait SlmBackend: Send + Sync {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError>;
}

impl<B: SlmBackend + ?Sized> SlmBackend for &B {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError> {
        (**self).generate(request)
    }
}

impl<B: SlmBackend + ?Sized> SlmBackend for std::sync::Arc<B> {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError> {
        (**self).generate(request)
    }
}

impl<B: SlmBackend + ?Sized> SlmBackend for Box<B> {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError> {
        (**self).generate(request)
    }
}

/// Generation through the sidecar's `/v1/slm/generate` endpoint.
#[derive(Debug, Clone)]
pub struct HttpSlm {
    client: SidecarClient,
}

impl HttpSlm {
    pub fn new(client: SidecarClient) -> Self {
        HttpSlm { client }
    }

    pub fn client(&self) -> &SidecarClient {
        &self.client
    }
}

impl SlmBackend for HttpSlm {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError> {
        let resp: SlmResponse = self.client.post_json(SLM_GENERATE_PATH, request)?;
        Ok(resp.text)
    }
}

/// Plays back a fixed list of outputs in order; the last one repeats.
#[derive(Debug)]
pub struct ScriptedSlm {
    script: Mutex<VecDeque<Result<String, BackendError>>>,
    last: Mutex<Option<Result<String, BackendError>>>,
    requests: Mutex<Vec<SlmRequest>>,
}

impl ScriptedSlm {
    pub fn new(script: impl IntoIterator<Item = Result<String, BackendError>>) -> Self {
        ScriptedSlm {
            script: Mutex::new(script.into_iter().collect()),
            last: Mutex::new(None),
            requests: Mutex::new(Vec::new()),
        }
    }

    pub fn replying(text: impl Into<String>) -> Self {
        Self::new([Ok(text.into())])
    }

    pub fn failing(message: impl Into<String>) -> Self {
        Self::new([Err(BackendError::Unavailable(message.into()))])
    }

    pub fn requests(&self) -> Vec<SlmRequest> {
        self.requests.lock().unwrap().clone()
    }

    pub fn call_count(&self) -> usize {
        self.requests.lock().unwrap().len()
    }
}

impl SlmBackend for ScriptedSlm {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError> {
        self.requests.lock().unwrap().push(request.clone());
        let mut last = self.last.lock().unwrap();
        if let Some(next) = self.script.lock().unwrap().pop_front() {
            *last = Some(next);
        }
        last.clone()
            .unwrap_or_else(|| Err(BackendError::Unavailable("empty script".into())))
    }
}

/// Returns the headline unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct EchoSlm;

impl SlmBackend for EchoSlm {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError> {
        Ok(request.headline.clone())
    }
}

/// Rule-based stand-in for a real model. Canned answers keyed by
/// (task, normalized headline) take precedence over the rules.
#[derive(Debug, Clone, Default)]
pub struct MockSlm {
    canned: HashMap<(SlmTask, String), String>,
}

#[derive(Debug, Deserialize)]
struct CannedFile {
    #[serde(default)]
    question: HashMap<String, String>,
    #[serde(default)]
    fake_headline: HashMap<String, String>,
}

impl MockSlm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_answer(mut self, task: SlmTask, headline: &str, text: impl Into<String>) -> Self {
        self.canned.insert((task, canon(headline)), text.into());
        self
    }

    /// Reads `{"question": {headline: text}, "fake_headline": {headline: text}}`.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let file: CannedFile = serde_json::from_str(text)?;
        let mut out = MockSlm::new();
        for (h, t) in file.question {
            out = out.with_answer(SlmTask::Question, &h, t);
        }
        for (h, t) in file.fake_headline {
            out = out.with_answer(SlmTask::FakeHeadline, &h, t);
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::Unavailable(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| BackendError::Malformed(format!("{}: {e}", path.display())))
    }

    pub fn canned_count(&self) -> usize {
        self.canned.len()
    }
}

fn canon(headline: &str) -> String {
    normalize_whitespace(headline).to_lowercase()
}

impl SlmBackend for MockSlm {
    fn generate(&self, request: &SlmRequest) -> Result<String, BackendError> {
        if let Some(text) = self.canned.get(&(request.task, canon(&request.headline))) {
            return Ok(text.clone());
        }
        let headline = normalize_whitespace(&request.headline);
        Ok(match request.task {
            SlmTask::Question => mock_question(&headline),
            SlmTask::FakeHeadline => mock_fake_headline(&headline),
        })
    }
}

const WIN_VERBS: [&str; 3] = ["wins", "won", "clinches"];

fn mock_question(headline: &str) -> String {
    let words: Vec<&str> = headline.split(' ').collect();
    if let Some(pos) = words.iter().position(|w| WIN_VERBS.contains(&w.to_lowercase().as_str())) {
        if pos > 0 && pos + 1 < words.len() {
            let object = words[pos + 1..].join(" ");
            let object = object.trim_start_matches("the ").trim_start_matches("The ");
            return format!("Who won the {}?", object.trim_end_matches(['.', '!']));
        }
    }
    format!("Is it true that {}?", headline.trim_end_matches(['.', '!', '?']))
}

const ANTONYMS: [(&str, &str); 10] = [
    ("wins", "loses"),
    ("won", "lost"),
    ("rises", "falls"),
    ("falls", "rises"),
    ("increases", "decreases"),
    ("approves", "rejects"),
    ("opens", "closes"),
    ("joins", "leaves"),
    ("beats", "loses to"),
    ("passes", "fails"),
];

const AUXILIARIES: [&str; 8] = ["is", "are", "was", "were", "will", "has", "have", "can"];

fn mock_fake_headline(headline: &str) -> String {
    let mut words: Vec<String> = headline.split(' ').map(str::to_string).collect();
    if let Some(w) = words.iter_mut().find(|w| w.chars().any(|c| c.is_ascii_digit())) {
        *w = swap_number(w);
        return words.join(" ");
    }
    if let Some(i) = words.iter().position(|w| AUXILIARIES.contains(&w.to_lowercase().as_str())) {
        words.insert(i + 1, "not".into());
        return words.join(" ");
    }
    for w in words.iter_mut() {
        if let Some((_, to)) = ANTONYMS.iter().find(|(from, _)| w.eq_ignore_ascii_case(from)) {
            *w = (*to).to_string();
            return words.join(" ");
        }
    }
    format!("Officials deny that {headline}")
}

/// Years move back a decade; other numbers gain one to their first digit.
fn swap_number(word: &str) -> String {
    let digits: String = word.chars().filter(|c| c.is_ascii_digit()).collect();
    if digits.len() == 4 && word.len() == 4 {
        if let Ok(year) = digits.parse::<u32>() {
            return (year - 10).to_string();
        }
    }
    let mut done = false;
    word.chars()
        .map(|c| match c.to_digit(10) {
            Some(d) if !done => {
                done = true;
                char::from_digit((d + 1) % 10, 10).unwrap()
            }
            _ => c,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(task: SlmTask, headline: &str) -> SlmRequest {
        SlmRequest {
            task,
            model: SlmKind::Phi3.model_id().into(),
            headline: headline.into(),
            prompt: String::new(),
            temperature: SLM_TEMPERATURE,
            max_new_tokens: SLM_MAX_NEW_TOKENS,
        }
    }

    #[test]
    fn mock_question_for_a_win_headline() {
        let out = MockSlm::new()
            .generate(&request(SlmTask::Question, "India wins 2023 ICC Men's Cricket World Cup"))
            .unwrap();
        assert_eq!(out, "Who won the 2023 ICC Men's Cricket World Cup?");
    }

    #[test]
    fn mock_question_fallback_form() {
        let out = MockSlm::new().generate(&request(SlmTask::Question, "Sky is green.")).unwrap();
        assert_eq!(out, "Is it true that Sky is green?");
    }

    #[test]
    fn mock_fake_headline_perturbs() {
        let m = MockSlm::new();
        let cases = [
            ("Max Verstappen wins 2023 F1 world title", "Max Verstappen wins 2013 F1 world title"),
            ("Turnout was 5 million", "Turnout was 6 million"),
            ("The bridge is open", "The bridge is not open"),
            ("Senate approves budget", "Senate rejects budget"),
            ("Local bakery celebrates anniversary", "Officials deny that Local bakery celebrates anniversary"),
        ];
        for (input, expected) in cases {
            assert_eq!(m.generate(&request(SlmTask::FakeHeadline, input)).unwrap(), expected);
        }
    }

    #[test]
    fn canned_answers_win() {
        let m = MockSlm::from_json(r#"{"question": {"A  b": "Who?"}}"#).unwrap();
        assert_eq!(m.canned_count(), 1);
        assert_eq!(m.generate(&request(SlmTask::Question, "a B")).unwrap(), "Who?");
        assert_ne!(m.generate(&request(SlmTask::FakeHeadline, "a B")).unwrap(), "Who?");
    }

    #[test]
    fn scripted_plays_in_order_then_repeats() {
        let s = ScriptedSlm::new([Ok("one".to_string()), Ok("two".to_string())]);
        let r = request(SlmTask::Question, "h");
        assert_eq!(s.generate(&r).unwrap(), "one");
        assert_eq!(s.generate(&r).unwrap(), "two");
        assert_eq!(s.generate(&r).unwrap(), "two");
        assert_eq!(s.call_count(), 3);
        assert!(ScriptedSlm::failing("down").generate(&r).unwrap_err().is_retryable());
    }

    #[test]
    fn kind_names() {
        assert_eq!("phi3".parse::<SlmKind>().unwrap(), SlmKind::Phi3);
        assert_eq!("Mistral".parse::<SlmKind>().unwrap(), SlmKind::Mistral);
        assert!("gpt".parse::<SlmKind>().is_err());
        assert!(SlmKind::Mistral.model_id().contains("Mistral-7B"));
    }
}
