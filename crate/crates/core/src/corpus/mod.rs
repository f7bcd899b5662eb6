//! Document model, shard I/O, tokenization and per-stage accounting.

mod document;
mod ledger;
mod shard;
mod tokenize;

use std::path::PathBuf;

pub use document::{Document, Source};
pub use ledger::{LedgerError, Manifest, SourceLedger, Stage, StageReport, PIPELINE_VERSION};
pub use shard::{
    read_jsonl, read_jsonl_with, read_shard, write_jsonl, write_records, write_shard, ReadOutcome, SkippedLine,
};
pub use tokenize::{count_tokens, tokenize, ReferenceTokenizer, Tokenizer};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {reason}")]
    Malformed {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CorpusError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.into(),
            source,
        }
    }
}
