use tracing::warn;
use veritas_core::text::normalize_whitespace;
use veritas_nli::wire::{SlmRequest, SlmTask};

use crate::error::PipelineError;
use crate::prompt::{PromptKind, PromptTemplate};
use crate::slm::{SlmBackend, SlmKind, SLM_MAX_NEW_TOKENS, SLM_TEMPERATURE};

fn build_request(task: SlmTask, kind: SlmKind, template: &PromptTemplate, headline: &str) -> SlmRequest {
    SlmRequest {
        task,
        model: kind.model_id().to_string(),
        headline: headline.trim().to_string(),
        prompt: template.render(headline),
        temperature: SLM_TEMPERATURE,
        max_new_tokens: SLM_MAX_NEW_TOKENS,
    }
}

fn strip_decoration(line: &str) -> &str {
    let mut s = line.trim();
    for prefix in ["question:", "fake headline:", "headline:", "q:", "- ", "* "] {
        if s.get(..prefix.len()).is_some_and(|p| p.eq_ignore_ascii_case(prefix)) {
            s = s[prefix.len()..].trim_start();
        }
    }
    if let Some(rest) = s.strip_prefix(|c: char| c.is_ascii_digit()) {
        if let Some(rest) = rest.strip_prefix(['.', ')']) {
            s = rest.trim_start();
        }
    }
    s.trim_matches(|c: char| c == '"' || c == '\u{201c}' || c == '\u{201d}' || c == '*')
        .trim()
}

/// First line containing `?`, cut just after its first `?`.
pub fn extract_question(raw: &str) -> Option<String> {
    raw.lines().find_map(|line| {
        let cut = line.find('?')?;
        let q = strip_decoration(&line[..=cut]);
        (q.len() > 1).then(|| q.to_string())
    })
}

/// First non-empty line with list markers, labels and quotes removed.
pub fn extract_headline(raw: &str) -> Option<String> {
    raw.lines()
        .map(strip_decoration)
        .find(|l| !l.is_empty())
        .map(normalize_whitespace)
}

pub fn generate_question(headline: &str, slm: &dyn SlmBackend, kind: SlmKind) -> Result<String, PipelineError> {
    generate_question_with(headline, slm, kind, &PromptTemplate::shipped(PromptKind::QuestionGen))
}

/// Asks the model for one verification question about `headline`.
pub fn generate_question_with(
    headline: &str,
    slm: &dyn SlmBackend,
    kind: SlmKind,
    template: &PromptTemplate,
) -> Result<String, PipelineError> {
    if headline.trim().is_empty() {
        return Err(PipelineError::EmptyHeadline);
    }
    let raw = slm.generate(&build_request(SlmTask::Question, kind, template, headline))?;
    extract_question(&raw).ok_or(PipelineError::QuestionGenFailure { raw })
}

pub fn generate_fake_headline(headline: &str, slm: &dyn SlmBackend, kind: SlmKind) -> Result<String, PipelineError> {
    generate_fake_headline_with(headline, slm, kind, &PromptTemplate::shipped(PromptKind::FakeHeadlineGen))
}

/// Asks the model for a perturbed version of `headline`. An output equal
/// to the input (case and whitespace aside) is regenerated once.
pub fn generate_fake_headline_with(
    headline: &str,
    slm: &dyn SlmBackend,
    kind: SlmKind,
    template: &PromptTemplate,
) -> Result<String, PipelineError> {
    if headline.trim().is_empty() {
        return Err(PipelineError::EmptyHeadline);
    }
    let request = build_request(SlmTask::FakeHeadline, kind, template, headline);
    let original = normalize_whitespace(headline).to_lowercase();
    for attempt in 0..2 {
        let raw = slm.generate(&request)?;
        match extract_headline(&raw) {
            Some(fake) if fake.to_lowercase() != original => return Ok(fake),
            _ => warn!(headline, attempt, "fake headline generation repeated its input"),
        }
    }
    Err(PipelineError::DegenerateGeneration { headline: headline.to_string() })
}
