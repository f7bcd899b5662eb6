//! The non-dedup curation stages and the pipeline runner that chains them
//! with the dedup stages.
//!
//! A [`CurationConfig`] is plain data; [`Curator::new`] compiles it (patterns,
//! language profiles, lexicon) so that configuration errors surface before any
//! document is touched.

mod clean;
mod domain;
mod extract;
mod lang;
mod pipeline;
mod sensitive;
mod url;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use clean::clean_text;
pub use domain::{default_lexicon, score_domain, DomainScorer, LexiconScorer};
pub use extract::extract_text;
pub use lang::{builtin_profiles, detect_language, LangProfile, UNDETERMINED};
pub use pipeline::{curate_files, Pipeline, PipelineOutput};
pub use sensitive::{default_sensitive_patterns, filter_sensitive_lines};
pub use url::filter_url;

use crate::dedup::DedupError;

#[derive(Debug, thiserror::Error)]
pub enum CurationError {
    #[error("invalid pattern `{pattern}`: {message}")]
    Pattern { pattern: String, message: String },
    #[error("invalid curation config: {0}")]
    Config(String),
    #[error("stage list must follow pipeline order without repeats: {0}")]
    StageOrder(String),
    #[error(transparent)]
    Dedup(#[from] DedupError),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
}

/// Outcome of a per-document predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Keep,
    Drop(&'static str),
}

impl Verdict {
    pub fn is_keep(self) -> bool {
        self == Verdict::Keep
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurationConfig {
    /// Globs, or regular expressions when prefixed with `re:`.
    pub url_allow_patterns: Vec<String>,
    pub url_block_patterns: Vec<String>,
    pub min_doc_tokens: usize,
    pub lang_target: String,
    pub lang_confidence_min: f64,
    pub domain_threshold: f64,
    pub domain_lexicon: Vec<String>,
    pub sensitive_patterns: BTreeMap<String, String>,
}

impl Default for CurationConfig {
    fn default() -> Self {
        CurationConfig {
            url_allow_patterns: Vec::new(),
            url_block_patterns: Vec::new(),
            min_doc_tokens: 32,
            lang_target: "en".into(),
            lang_confidence_min: 0.65,
            domain_threshold: 0.05,
            domain_lexicon: default_lexicon(),
            sensitive_patterns: default_sensitive_patterns(),
        }
    }
}

/// Compiled form of a [`CurationConfig`].
pub struct Curator {
    pub config: CurationConfig,
    pub(crate) url: url::UrlRules,
    pub(crate) profiles: Vec<LangProfile>,
    pub(crate) domain: Box<dyn DomainScorer>,
    pub(crate) sensitive: Vec<(String, regex::Regex)>,
}

impl std::fmt::Debug for Curator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Curator").field("config", &self.config).finish_non_exhaustive()
    }
}

impl Curator {
    pub fn new(config: CurationConfig) -> Result<Self, CurationError> {
        Self::with_profiles(config, builtin_profiles())
    }

    pub fn with_profiles(config: CurationConfig, profiles: Vec<LangProfile>) -> Result<Self, CurationError> {
        for (name, v) in [
            ("lang_confidence_min", config.lang_confidence_min),
            ("domain_threshold", config.domain_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CurationError::Config(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if profiles.is_empty() {
            return Err(CurationError::Config("no language profiles".into()));
        }
        if !profiles.iter().any(|p| p.language == config.lang_target) {
            return Err(CurationError::Config(format!(
                "no language profile for target `{}`",
                config.lang_target
            )));
        }
        let url = url::UrlRules::compile(&config.url_allow_patterns, &config.url_block_patterns)?;
        let sensitive = config
            .sensitive_patterns
            .iter()
            .map(|(name, pat)| {
                regex::Regex::new(pat)
                    .map(|re| (name.clone(), re))
                    .map_err(|e| CurationError::Pattern {
                        pattern: pat.clone(),
                        message: e.to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let domain = Box::new(LexiconScorer::new(&config.domain_lexicon));
        Ok(Curator {
            config,
            url,
            profiles,
            domain,
            sensitive,
        })
    }

    /// Replaces the domain scorer, e.g. with a learned classifier.
    pub fn with_domain_scorer(mut self, scorer: Box<dyn DomainScorer>) -> Self {
        self.domain = scorer;
        self
    }

    pub fn profiles(&self) -> &[LangProfile] {
        &self.profiles
    }

    /// Checks requirements that only apply when a given stage is enabled.
    pub(crate) fn check_for_domain_stage(&self) -> Result<(), CurationError> {
        if self.domain.is_lexicon() && self.config.domain_lexicon.is_empty() {
            return Err(CurationError::Config(
                "domain_lexicon is empty but the domain stage is enabled".into(),
            ));
        }
        Ok(())
    }
}
