use std::collections::{HashMap, HashSet};

const STOPWORDS: &str = include_str!("../data/stopwords.txt");
const LEMMAS: &str = include_str!("../data/lemmas.tsv");

/// Stopword set and inflection table used by [`crate::preprocess`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    stopwords: HashSet<String>,
    lemmas: HashMap<String, String>,
}

impl Default for Lexicon {
    /// The shipped 150-word stopword list and inflection table.
    fn default() -> Self {
        Self::from_sources(STOPWORDS, LEMMAS)
    }
}

impl Lexicon {
    pub fn new(stopwords: HashSet<String>, lemmas: HashMap<String, String>) -> Self {
        Self { stopwords, lemmas }
    }

    /// Parses a stopword list (one word per line) and a tab-separated
    /// `inflected<TAB>lemma` table. Lines starting with `#` are ignored.
    pub fn from_sources(stopwords: &str, lemmas: &str) -> Self {
        let stopwords = data_lines(stopwords).map(str::to_lowercase).collect();
        let lemmas = data_lines(lemmas)
            .filter_map(|l| {
                let (form, lemma) = l.split_once('\t')?;
                Some((form.trim().to_lowercase(), lemma.trim().to_lowercase()))
            })
            .collect();
        Self { stopwords, lemmas }
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    /// Root form of `token`, or the token itself when the table has no entry.
    pub fn lemma<'a>(&'a self, token: &'a str) -> &'a str {
        self.lemmas.get(token).map(String::as_str).unwrap_or(token)
    }

    pub fn stopword_count(&self) -> usize {
        self.stopwords.len()
    }

    pub fn lemma_count(&self) -> usize {
        self.lemmas.len()
    }
}

fn data_lines(src: &str) -> impl Iterator<Item = &str> {
    src.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_lists_load() {
        let lx = Lexicon::default();
        assert_eq!(lx.stopword_count(), 150);
        assert!(lx.lemma_count() > 300);
        assert!(lx.is_stopword("the") && lx.is_stopword("are"));
        assert_eq!(lx.lemma("cats"), "cat");
        assert_eq!(lx.lemma("running"), "run");
        assert_eq!(lx.lemma("children"), "child");
        assert_eq!(lx.lemma("zebra"), "zebra");
    }

    #[test]
    fn lemma_targets_are_not_stopwords() {
        let lx = Lexicon::default();
        for (form, lemma) in &lx.lemmas {
            assert!(!lx.is_stopword(form), "{form} is a stopword");
            assert!(!lemma.is_empty());
        }
    }
}
