use super::{Curator, Verdict};
use crate::corpus::{tokenize, Document};

const MAX_PUNCT_RUN: usize = 4;
const MAX_NON_TEXT_RATIO: f64 = 0.5;

fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut run_char = None;
    let mut run_len = 0;
    for c in text.chars() {
        if c.is_control() && c != '\n' && c != '\t' {
            continue;
        }
        let punct = !c.is_alphanumeric() && !c.is_whitespace();
        if punct && run_char == Some(c) {
            run_len += 1;
        } else {
            run_char = punct.then_some(c);
            run_len = 1;
        }
        if !punct || run_len <= MAX_PUNCT_RUN {
            out.push(c);
        }
    }
    out
}

/// Strips control characters, caps runs of one punctuation character at four,
/// then drops documents that are too short or mostly non-text tokens.
pub fn clean_text(doc: Document, curator: &Curator) -> (Verdict, Document) {
    let text = normalize(&doc.text);
    let mut doc = doc;
    if text != doc.text {
        doc.set_text(text);
    }
    let toks = tokenize(&doc.text);
    if toks.len() < curator.config.min_doc_tokens {
        return (Verdict::Drop("too_short"), doc);
    }
    let non_text = toks
        .iter()
        .filter(|t| !t.chars().any(char::is_alphanumeric))
        .count();
    if !toks.is_empty() && non_text as f64 / toks.len() as f64 > MAX_NON_TEXT_RATIO {
        return (Verdict::Drop("non_text"), doc);
    }
    (Verdict::Keep, doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use crate::curation::CurationConfig;
    use proptest::prelude::*;

    fn curator(min: usize) -> Curator {
        Curator::new(CurationConfig {
            min_doc_tokens: min,
            ..Default::default()
        })
        .unwrap()
    }

    fn words(n: usize) -> String {
        (0..n).map(|i| format!("w{i}")).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn short_docs_drop() {
        let (v, _) = clean_text(Document::new("d", words(10), Source::News), &curator(32));
        assert_eq!(v, Verdict::Drop("too_short"));
    }

    #[test]
    fn clean_long_doc_unchanged() {
        let d = Document::new("d", words(100), Source::News);
        let (v, out) = clean_text(d.clone(), &curator(32));
        assert_eq!(v, Verdict::Keep);
        assert_eq!(out, d);
    }

    #[test]
    fn punctuation_runs_are_capped() {
        assert_eq!(normalize("wow!!!!!!!"), "wow!!!!");
        assert_eq!(normalize("a....b---c"), "a....b---c");
        assert_eq!(normalize("x\u{0}y\u{7}z\r\n"), "xyz\n");
    }

    #[test]
    fn mostly_symbols_drop() {
        let (v, _) = clean_text(Document::new("d", "a # $ % ^ & *", Source::News), &curator(1));
        assert_eq!(v, Verdict::Drop("non_text"));
    }

    proptest! {
        #[test]
        fn idempotent(s in "[a-z !?.\u{0}\u{1}\n]{0,60}") {
            let c = curator(0);
            let (_, once) = clean_text(Document::new("d", s, Source::News), &c);
            let (_, twice) = clean_text(once.clone(), &c);
            prop_assert_eq!(once, twice);
        }
    }
}
