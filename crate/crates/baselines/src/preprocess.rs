use crate::lexicon::Lexicon;

/// Lowercases, tokenizes, keeps purely alphabetic tokens, drops stopwords and
/// maps each survivor through the lemma table. Token order is preserved.
pub fn preprocess(text: &str, lexicon: &Lexicon) -> Vec<String> {
    let lower = text.to_lowercase();
    tokenize(&lower)
        .into_iter()
        .filter(|t| t.chars().all(char::is_alphabetic))
        .filter(|t| !lexicon.is_stopword(t))
        .map(|t| lexicon.lemma(t).to_string())
        .collect()
}

/// Word tokens are maximal alphanumeric runs; every other non-space
/// character is a token of its own.
pub fn tokenize(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() {
            start.get_or_insert(i);
            continue;
        }
        if let Some(s) = start.take() {
            out.push(&text[s..i]);
        }
        if !c.is_whitespace() {
            out.push(&text[i..i + c.len_utf8()]);
        }
    }
    if let Some(s) = start {
        out.push(&text[s..]);
    }
    out
}
