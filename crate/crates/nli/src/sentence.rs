//! Rule-based sentence segmentation for news prose.

use std::collections::HashSet;

const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

const TERMINALS: [char; 3] = ['.', '!', '?'];
const CLOSERS: [char; 7] = ['"', '\'', '\u{201d}', '\u{2019}', ')', ']', '}'];
const OPENERS: [char; 7] = ['"', '\'', '\u{201c}', '\u{2018}', '(', '[', '{'];

/// Splits text at `.`, `!` and `?` followed by whitespace, except after a
/// listed abbreviation or when the next word starts lowercase. Terminal
/// punctuation and trailing quotes stay with their sentence.
#[derive(Debug, Clone)]
pub struct SentenceSplitter {
    abbreviations: HashSet<String>,
}

impl Default for SentenceSplitter {
    fn default() -> Self {
        SentenceSplitter::from_list(DEFAULT_ABBREVIATIONS)
    }
}

impl SentenceSplitter {
    /// Builds a splitter from a newline-separated abbreviation list; `#`
    /// starts a comment line.
    pub fn from_list(list: &str) -> Self {
        let abbreviations = list
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        SentenceSplitter { abbreviations }
    }

    pub fn is_abbreviation(&self, word: &str) -> bool {
        self.abbreviations.contains(&word.to_lowercase())
    }

    /// Segments `text`. Line breaks are hard boundaries, so headings on
    /// their own line stay separate. Whitespace-only input yields an empty
    /// list; text without a boundary yields a single segment.
    pub fn split(&self, text: &str) -> Vec<String> {
        text.lines().flat_map(|line| self.split_line(line)).collect()
    }

    fn split_line(&self, text: &str) -> Vec<String> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut out = Vec::new();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            let (_, c) = chars[i];
            if !TERMINALS.contains(&c) {
                i += 1;
                continue;
            }
            let term_idx = i;
            let mut j = i + 1;
            while j < chars.len() && (TERMINALS.contains(&chars[j].1) || CLOSERS.contains(&chars[j].1)) {
                j += 1;
            }
            let end_byte = chars.get(j).map_or(text.len(), |(b, _)| *b);
            if j < chars.len() && !chars[j].1.is_whitespace() {
                i = j;
                continue;
            }
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            let at_end = k >= chars.len();
            if !at_end && !self.is_boundary(text, &chars, start, term_idx, k) {
                i = j;
                continue;
            }
            push_segment(&mut out, &text[start..end_byte]);
            start = end_byte;
            i = j;
        }
        push_segment(&mut out, &text[start..]);
        out
    }

    fn is_boundary(&self, text: &str, chars: &[(usize, char)], start: usize, term_idx: usize, next_idx: usize) -> bool {
        let next = chars[next_idx].1;
        if next.is_lowercase() {
            return false;
        }
        if chars[term_idx].1 != '.' {
            return true;
        }
        // word ending at the period, opening punctuation stripped
        let term_byte = chars[term_idx].0;
        let word_start = text[start..term_byte]
            .rfind(char::is_whitespace)
            .map_or(start, |p| start + p + 1);
        let word = text[word_start..=term_byte].trim_start_matches(|c| OPENERS.contains(&c));
        !self.is_abbreviation(word)
    }
}

fn push_segment(out: &mut Vec<String>, seg: &str) {
    let seg = seg.trim();
    if !seg.is_empty() {
        out.push(seg.to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(s: &str) -> Vec<String> {
        SentenceSplitter::default().split(s)
    }

    #[test]
    fn three_terminals() {
        assert_eq!(split("A. B? C!"), vec!["A.", "B?", "C!"]);
    }

    #[test]
    fn abbreviation_does_not_split() {
        assert_eq!(split("Dr. Smith won."), vec!["Dr. Smith won."]);
    }

    #[test]
    fn line_breaks_are_boundaries() {
        assert_eq!(split("Heading without stop
First. Second.

Third"), vec!["Heading without stop", "First.", "Second.", "Third"]);
    }

    #[test]
    fn no_punctuation() {
        assert_eq!(split("no punctuation"), vec!["no punctuation"]);
    }

    #[test]
    fn whitespace_only_is_empty() {
        assert!(split(" \n ").is_empty());
    }

    #[test]
    fn quotes_stay_with_sentence() {
        assert_eq!(
            split("He said \"we won.\" Then he left."),
            vec!["He said \"we won.\"", "Then he left."]
        );
    }

    #[test]
    fn decimals_and_lowercase_continuations() {
        assert_eq!(split("Growth was 3.5 percent. Rates rose."), vec!["Growth was 3.5 percent.", "Rates rose."]);
        assert_eq!(split("It hit 5 a.m. local time."), vec!["It hit 5 a.m. local time."]);
    }

    #[test]
    fn concatenation_preserves_text() {
        let text = "Max Verstappen was crowned champion.  The Dutchman won in Qatar!\nWhat next? More titles.";
        let joined: String = split(text).join(" ");
        let squash = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ");
        assert_eq!(squash(&joined), squash(text));
    }
}
