use scraper::{ElementRef, Html};
use url::Url;
use veritas_core::text::normalize_whitespace;

use crate::selectors::{SelectorList, Selectors};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaaEntry {
    pub question: String,
    pub answer: String,
    /// Source link shown under the answer, when present.
    pub link: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArticleText {
    pub headings: Vec<String>,
    pub paragraphs: Vec<String>,
}

impl ArticleText {
    pub fn is_empty(&self) -> bool {
        self.headings.is_empty() && self.paragraphs.is_empty()
    }

    /// Headings, then paragraphs, one per line.
    pub fn to_passage(&self) -> String {
        self.headings.iter().chain(&self.paragraphs).cloned().collect::<Vec<_>>().join("\n")
    }
}

/// A result link as it appears on the search page, before ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultLink {
    pub url: String,
    pub title: String,
}

const HIDDEN: [&str; 5] = ["script", "style", "noscript", "template", "head"];
const BLOCK: [&str; 22] = [
    "address", "article", "blockquote", "br", "dd", "div", "dl", "dt", "figcaption", "h1", "h2", "h3", "h4", "h5",
    "h6", "hr", "li", "ol", "p", "section", "td", "ul",
];

/// Visible text of an element: text nodes concatenated, block boundaries
/// turned into spaces, whitespace collapsed.
pub fn visible_text(el: ElementRef<'_>) -> String {
    let mut buf = String::new();
    collect_text(el, &mut buf);
    normalize_whitespace(&buf)
}

fn collect_text(el: ElementRef<'_>, buf: &mut String) {
    for child in el.children() {
        if let Some(t) = child.value().as_text() {
            buf.push_str(t);
        } else if let Some(ce) = ElementRef::wrap(child) {
            let name = ce.value().name();
            if HIDDEN.contains(&name) {
                continue;
            }
            let block = BLOCK.contains(&name);
            if block {
                buf.push(' ');
            }
            collect_text(ce, buf);
            if block {
                buf.push(' ');
            }
        }
    }
}

fn first_match<'a>(scope: ElementRef<'a>, list: &SelectorList) -> Option<ElementRef<'a>> {
    list.selectors().iter().find_map(|s| scope.select(s).next())
}

fn all_matches<'a>(doc: &'a Html, list: &SelectorList) -> Vec<ElementRef<'a>> {
    for s in list.selectors() {
        let found: Vec<_> = doc.select(s).collect();
        if !found.is_empty() {
            return found;
        }
    }
    Vec::new()
}

/// Resolves an href against the page URL, unwrapping `/url?q=` redirects.
/// Only http(s) targets survive.
pub fn resolve_link(base: &Url, href: &str) -> Option<Url> {
    let mut target = base.join(href.trim()).ok()?;
    if target.path() == "/url" {
        let inner = target.query_pairs().find(|(k, _)| k == "q" || k == "url").map(|(_, v)| v.into_owned());
        target = Url::parse(&inner?).ok()?;
    }
    target.set_fragment(None);
    matches!(target.scheme(), "http" | "https").then_some(target)
}

/// Answer-box text, if any configured selector matches with non-empty text.
pub fn extract_quick_answer(body: &str, sel: &Selectors) -> Option<String> {
    let doc = Html::parse_document(body);
    let root = doc.root_element();
    sel.quick_answer
        .selectors()
        .iter()
        .flat_map(|s| root.select(s))
        .map(visible_text)
        .find(|t| !t.is_empty())
}

/// People-also-asked entries in page order; entries without a question or
/// answer are dropped.
pub fn extract_people_also_asked(body: &str, base: &Url, sel: &Selectors) -> Vec<PaaEntry> {
    let doc = Html::parse_document(body);
    all_matches(&doc, &sel.paa_item)
        .into_iter()
        .filter_map(|item| {
            let question = first_match(item, &sel.paa_question).map(visible_text)?;
            let answer = first_match(item, &sel.paa_answer).map(visible_text)?;
            if question.is_empty() || answer.is_empty() {
                return None;
            }
            let link = sel
                .paa_link
                .selectors()
                .iter()
                .flat_map(|s| item.select(s))
                .filter_map(|a| a.value().attr("href"))
                .find_map(|h| resolve_link(base, h))
                .map(String::from);
            Some(PaaEntry { question, answer, link })
        })
        .collect()
}

/// Organic result links in page order, deduplicated.
pub fn extract_result_links(body: &str, base: &Url, sel: &Selectors) -> Vec<ResultLink> {
    let doc = Html::parse_document(body);
    let mut out: Vec<ResultLink> = Vec::new();
    for block in all_matches(&doc, &sel.result) {
        let Some(url) = sel
            .result_link
            .selectors()
            .iter()
            .flat_map(|s| block.select(s))
            .filter_map(|a| a.value().attr("href"))
            .find_map(|h| resolve_link(base, h))
        else {
            continue;
        };
        let url = url.to_string();
        if out.iter().any(|r| r.url == url) {
            continue;
        }
        let title = first_match(block, &sel.result_title).map(visible_text).unwrap_or_default();
        out.push(ResultLink { url, title });
    }
    out
}

fn inside_excluded(el: ElementRef<'_>, exclude: &[String]) -> bool {
    el.ancestors()
        .filter_map(ElementRef::wrap)
        .any(|a| exclude.iter().any(|x| x == a.value().name()))
}

/// Headings and paragraphs in document order, skipping page chrome.
/// Paragraphs shorter than the configured token minimum are dropped.
pub fn extract_article(body: &str, sel: &Selectors) -> ArticleText {
    let doc = Html::parse_document(body);
    let keep = |el: &ElementRef<'_>| !inside_excluded(*el, &sel.exclude);
    let headings = doc
        .select(&sel.headings)
        .filter(keep)
        .map(visible_text)
        .filter(|t| !t.is_empty())
        .collect();
    let paragraphs = doc
        .select(&sel.paragraphs)
        .filter(keep)
        .map(visible_text)
        .filter(|t| t.split_whitespace().count() >= sel.min_paragraph_tokens.max(1))
        .collect();
    ArticleText { headings, paragraphs }
}
