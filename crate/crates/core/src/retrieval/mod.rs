//! Lexical retrieval and prompt assembly.
//!
//! [`Index`] is an inverted index scored with BM25 and restricted to a date
//! window; [`EmbeddingIndex`] ranks externally computed vectors by cosine.
//! [`build_prompt`] renders the sectioned expert prompt and
//! [`build_retrieval_chain`] the two-stage extract-then-answer prompts.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

mod bm25;
mod embed;
mod persist;
mod prompt;

pub use bm25::{bm25_search, index_documents, index_terms, IndexedDoc, Index};
pub use embed::EmbeddingIndex;
pub use persist::{load_index, save_index, INDEX_MAGIC, INDEX_VERSION};
pub use prompt::{
    build_prompt, build_retrieval_chain, stage1_prompt, PromptSpec, Stage2Builder, DEFAULT_INSTRUCTIONS,
    DEFAULT_PERSONA, EXTRACTION_INSTRUCTION, TOOL_INSTRUCTION,
};

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("invalid retrieval config: {0}")]
    Config(String),
    #[error("embedding for {id:?} has dimension {got}, expected {expected}")]
    Dimension { id: String, got: usize, expected: usize },
    #[error("index file: {0}")]
    Format(String),
    #[error("index was built under config {found}, expected {expected}")]
    DigestMismatch { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RetrievalConfig {
    pub k1: f64,
    pub b: f64,
    pub top_k: usize,
    /// Inclusive window bounds; dated documents outside are never returned,
    /// undated documents always qualify. An open bound is written `"none"`.
    #[serde(with = "open_date")]
    pub date_from: Option<NaiveDate>,
    #[serde(with = "open_date")]
    pub date_to: Option<NaiveDate>,
}

/// `Option<NaiveDate>` as a date string, with `"none"` (or JSON `null`) for
/// an open bound; formats without a null such as TOML can express both.
mod open_date {
    use chrono::NaiveDate;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<NaiveDate>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.collect_str(d),
            None => s.serialize_str("none"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<NaiveDate>, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(None),
            Some(s) if s.eq_ignore_ascii_case("none") || s.is_empty() => Ok(None),
            Some(s) => s.parse().map(Some).map_err(serde::de::Error::custom),
        }
    }
}

impl Default for RetrievalConfig {
    fn default() -> Self {
        RetrievalConfig {
            k1: 1.2,
            b: 0.75,
            top_k: 5,
            date_from: NaiveDate::from_ymd_opt(2022, 1, 1),
            date_to: NaiveDate::from_ymd_opt(2023, 9, 30),
        }
    }
}

impl RetrievalConfig {
    pub fn validate(&self) -> Result<(), RetrievalError> {
        if !(self.k1 > 0.0 && self.k1.is_finite()) {
            return Err(RetrievalError::Config(format!("k1 must be positive, got {}", self.k1)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(RetrievalError::Config(format!("b must lie in [0, 1], got {}", self.b)));
        }
        if self.top_k == 0 {
            return Err(RetrievalError::Config("top_k must be at least 1".into()));
        }
        if let (Some(f), Some(t)) = (self.date_from, self.date_to) {
            if f > t {
                return Err(RetrievalError::Config(format!("date_from {f} is after date_to {t}")));
            }
        }
        Ok(())
    }

    /// Whether a document with this date may be returned.
    pub fn admits(&self, date: Option<NaiveDate>) -> bool {
        match date {
            None => true,
            Some(d) => self.date_from.is_none_or(|f| d >= f) && self.date_to.is_none_or(|t| d <= t),
        }
    }
}

/// A ranked result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub id: String,
    pub score: f64,
}

/// Sorts by descending score, then ascending id, and keeps `top_k`.
pub(crate) fn rank(mut hits: Vec<SearchHit>, top_k: usize) -> Vec<SearchHit> {
    hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.id.cmp(&b.id)));
    hits.truncate(top_k);
    hits
}
