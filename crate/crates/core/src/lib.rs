//! Data-engineering toolkit for financial language-model corpora.
//!
//! The crate is organised around the flow of a corpus through curation:
//!
//! - [`corpus`]: the document model, shard I/O, tokenization and stage accounting.
//! - [`curation`]: URL filtering, text extraction, language ID, domain scoring,
//!   sensitive-line removal, cleaning, and the pipeline runner.
//! - [`dedup`]: MinHash/LSH fuzzy deduplication and exact content-hash deduplication.
//! - [`builders`]: instruction, preference-pair and multiple-choice dataset builders.
//! - [`toolcall`]: the `Add`/`Subtract`/`Multiply`/`Divide` program language.
//! - [`retrieval`]: BM25 index, embedding ranking and prompt assembly.
//! - [`metrics`]: task metrics, hallucination index and annotator agreement.
//! - [`config`] and [`report`]: shared configuration and ledger rendering.

pub mod builders;
pub mod config;
pub mod corpus;
pub mod curation;
pub mod dedup;
pub mod metrics;
pub mod report;
pub mod retrieval;
pub mod toolcall;

pub(crate) mod rng;

pub use corpus::{Document, Manifest, Source, Stage, StageReport};
