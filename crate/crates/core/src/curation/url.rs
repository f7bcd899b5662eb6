use globset::{GlobBuilder, GlobMatcher};
use regex::Regex;

use super::{CurationError, Curator, Verdict};
use crate::corpus::Document;

enum Rule {
    Glob(GlobMatcher),
    Regex(Regex),
}

impl Rule {
    fn compile(pattern: &str) -> Result<Rule, CurationError> {
        let err = |message: String| CurationError::Pattern {
            pattern: pattern.to_string(),
            message,
        };
        match pattern.strip_prefix("re:") {
            Some(re) => Regex::new(re).map(Rule::Regex).map_err(|e| err(e.to_string())),
            None => GlobBuilder::new(pattern)
                .case_insensitive(true)
                .build()
                .map(|g| Rule::Glob(g.compile_matcher()))
                .map_err(|e| err(e.to_string())),
        }
    }

    fn matches(&self, url: &str) -> bool {
        match self {
            Rule::Glob(g) => g.is_match(url),
            Rule::Regex(r) => r.is_match(url),
        }
    }
}

pub(crate) struct UrlRules {
    allow: Vec<Rule>,
    block: Vec<Rule>,
}

impl UrlRules {
    pub(crate) fn compile(allow: &[String], block: &[String]) -> Result<Self, CurationError> {
        Ok(UrlRules {
            allow: allow.iter().map(|p| Rule::compile(p)).collect::<Result<_, _>>()?,
            block: block.iter().map(|p| Rule::compile(p)).collect::<Result<_, _>>()?,
        })
    }
}

/// Block patterns win; a non-empty allow list must then match. Documents
/// without a URL pass.
pub fn filter_url(doc: &Document, curator: &Curator) -> Verdict {
    let Some(url) = doc.url.as_deref() else {
        return Verdict::Keep;
    };
    let rules = &curator.url;
    if rules.block.iter().any(|r| r.matches(url)) {
        return Verdict::Drop("url_block");
    }
    if !rules.allow.is_empty() && !rules.allow.iter().any(|r| r.matches(url)) {
        return Verdict::Drop("url_not_allowed");
    }
    Verdict::Keep
}
