use veritas_core::Passage;
use veritas_nli::SentenceSplitter;

pub const DEFAULT_PREMISE_CAP: usize = 60;

/// Joins passages in order, separated by blank lines, keeping at most
/// `cap` sentences. Line structure inside a passage is preserved so that
/// headings stay separate sentences.
pub fn assemble_premise(passages: &[Passage], splitter: &SentenceSplitter, cap: usize) -> String {
    let mut blocks = Vec::new();
    let mut used = 0usize;
    'outer: for passage in passages {
        let mut lines = Vec::new();
        for line in passage.text.lines() {
            if used >= cap {
                if !lines.is_empty() {
                    blocks.push(lines.join("\n"));
                }
                break 'outer;
            }
            let sentences = splitter.split(line);
            if sentences.is_empty() {
                continue;
            }
            let take = sentences.len().min(cap - used);
            used += take;
            lines.push(sentences[..take].join(" "));
        }
        if !lines.is_empty() {
            blocks.push(lines.join("\n"));
        }
    }
    blocks.join("\n\n")
}
