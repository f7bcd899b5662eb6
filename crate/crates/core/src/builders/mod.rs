//! Derived-dataset builders: deduplicated financial instructions, preference
//! pairs for preference optimization, and definition multiple-choice items.
//!
//! All builders are pure functions of their input and seed. Random choices use
//! a generator keyed on `(seed, item index)`, so an item's outcome does not
//! depend on the other items or on the order in which they are processed.

use thiserror::Error;

mod instructions;
mod mcq;
mod preference;

pub use instructions::{dedup_instructions, instruction_text, InstructionRecord, InstructionSummary};
pub use mcq::{
    build_mcq, build_mcq_with, mcq_question, read_mcq_tsv, write_mcq_tsv, McqItem, Similarity,
    TermDefinition, TfIdfSimilarity,
};
pub use preference::{
    build_preference_pairs, Candidate, ItemError, PreferenceItem, PreferenceOutcome, PreferencePair,
};

#[derive(Debug, Error)]
pub enum BuilderError {
    #[error("glossary has {got} terms, need at least {need}")]
    GlossaryTooSmall { need: usize, got: usize },
    #[error("duplicate glossary term {0:?}")]
    DuplicateTerm(String),
    #[error("glossary entry {index} has an empty term or definition")]
    EmptyEntry { index: usize },
    #[error("term {term:?} has only {available} distinct alternative definitions, need {need}")]
    NotEnoughDistinct { term: String, available: usize, need: usize },
    #[error("malformed MCQ row {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
