use std::collections::HashSet;

use super::{Curator, Verdict};
use crate::corpus::{tokenize, Document};

/// Scores how strongly a text belongs to the target domain, in [0, 1].
pub trait DomainScorer: Send + Sync {
    fn score(&self, text: &str) -> f64;

    /// Whether this scorer depends on the configured lexicon.
    fn is_lexicon(&self) -> bool {
        false
    }
}

/// Fraction of tokens whose lowercase form is a lexicon term.
#[derive(Debug, Clone)]
pub struct LexiconScorer {
    terms: HashSet<String>,
}

impl LexiconScorer {
    pub fn new<S: AsRef<str>>(terms: &[S]) -> Self {
        LexiconScorer {
            terms: terms.iter().map(|t| t.as_ref().to_lowercase()).collect(),
        }
    }
}

impl DomainScorer for LexiconScorer {
    fn score(&self, text: &str) -> f64 {
        let toks = tokenize(text);
        if toks.is_empty() {
            return 0.0;
        }
        let hits = toks
            .iter()
            .filter(|t| self.terms.contains(&t.to_lowercase()))
            .count();
        hits as f64 / toks.len() as f64
    }

    fn is_lexicon(&self) -> bool {
        true
    }
}

pub fn default_lexicon() -> Vec<String> {
    include_str!("../../data/financial_lexicon.txt")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

pub fn score_domain(doc: &Document, curator: &Curator) -> f64 {
    curator.domain.score(&doc.text)
}

pub(crate) fn domain_verdict(doc: &Document, curator: &Curator) -> Verdict {
    if score_domain(doc, curator) >= curator.config.domain_threshold {
        Verdict::Keep
    } else {
        Verdict::Drop("off_domain")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use crate::curation::CurationConfig;

    fn curator() -> Curator {
        Curator::new(CurationConfig {
            domain_lexicon: ["dividend", "equity", "portfolio", "yield"]
                .map(String::from)
                .to_vec(),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn examples() {
        let c = curator();
        let d = |t: &str| Document::new("d", t, Source::News);
        assert!((score_domain(&d("dividend yield and equity portfolio"), &c) - 0.8).abs() < 1e-12);
        assert_eq!(score_domain(&d("sunny weather today"), &c), 0.0);
        assert_eq!(score_domain(&d(""), &c), 0.0);
    }

    #[test]
    fn case_insensitive_and_threshold() {
        let c = curator();
        let d = Document::new("d", "Dividend news", Source::News);
        assert_eq!(score_domain(&d, &c), 0.5);
        assert!(domain_verdict(&d, &c).is_keep());
        let off = Document::new("d", "cats and dogs", Source::News);
        assert_eq!(domain_verdict(&off, &c), Verdict::Drop("off_domain"));
    }

    #[test]
    fn default_lexicon_is_lowercase_and_unique() {
        let lex = default_lexicon();
        let set: HashSet<_> = lex.iter().collect();
        assert_eq!(set.len(), lex.len());
        assert!(lex.iter().all(|t| *t == t.to_lowercase()));
    }
}
