use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{count_tokens, CorpusError};

/// Origin of a record; the rows of the pretraining-resource ledger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    C4,
    News,
    Sec,
    Social,
    Press,
    Other,
}

impl Source {
    pub const ALL: [Source; 6] = [
        Source::C4,
        Source::News,
        Source::Sec,
        Source::Social,
        Source::Press,
        Source::Other,
    ];

    /// Row label used in ledger tables.
    pub fn display_name(self) -> &'static str {
        match self {
            Source::C4 => "C4",
            Source::News => "News",
            Source::Sec => "SEC",
            Source::Social => "Social Media",
            Source::Press => "Press",
            Source::Other => "Other",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

/// One corpus record. Fields not known to this crate are kept in `extra` and
/// written back unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    pub text: String,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub date: Option<NaiveDate>,
    pub tokens: u64,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>, source: Source) -> Self {
        let text = text.into();
        let tokens = count_tokens(&text) as u64;
        Document {
            id: id.into(),
            url: None,
            text,
            source,
            lang: None,
            date: None,
            tokens,
            extra: Map::new(),
        }
    }

    pub fn with_url(mut self, url: impl Into<String>) -> Self {
        self.url = Some(url.into());
        self
    }

    pub fn with_date(mut self, date: NaiveDate) -> Self {
        self.date = Some(date);
        self
    }

    pub fn with_lang(mut self, lang: impl Into<String>) -> Self {
        self.lang = Some(lang.into());
        self
    }

    /// Replaces the text and refreshes the cached token count.
    pub fn set_text(&mut self, text: String) {
        self.tokens = count_tokens(&text) as u64;
        self.text = text;
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.id.is_empty() {
            return Err(CorpusError::Invalid("empty id".into()));
        }
        if let Some(lang) = &self.lang {
            if lang.len() != 2 || !lang.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(CorpusError::Invalid(format!(
                    "document `{}`: lang `{lang}` is not a 2-letter code",
                    self.id
                )));
            }
        }
        let counted = count_tokens(&self.text) as u64;
        if counted != self.tokens {
            return Err(CorpusError::Invalid(format!(
                "document `{}`: tokens is {} but text has {counted}",
                self.id, self.tokens
            )));
        }
        Ok(())
    }
}

/// Wire form accepted on read: `tokens` may be omitted and is then computed.
#[derive(Deserialize)]
pub(super) struct DocumentRecord {
    id: String,
    #[serde(default)]
    url: Option<String>,
    text: String,
    source: Source,
    #[serde(default)]
    lang: Option<String>,
    #[serde(default)]
    date: Option<NaiveDate>,
    #[serde(default)]
    tokens: Option<u64>,
    #[serde(flatten)]
    extra: Map<String, Value>,
}

impl TryFrom<DocumentRecord> for Document {
    type Error = CorpusError;

    fn try_from(r: DocumentRecord) -> Result<Self, Self::Error> {
        let tokens = r.tokens.unwrap_or_else(|| count_tokens(&r.text) as u64);
        let doc = Document {
            id: r.id,
            url: r.url,
            text: r.text,
            source: r.source,
            lang: r.lang,
            date: r.date,
            tokens,
            extra: r.extra,
        };
        doc.validate()?;
        Ok(doc)
    }
}
