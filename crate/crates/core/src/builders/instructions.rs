use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{count_tokens, Stage, StageReport};
use crate::curation::{DomainScorer, LexiconScorer};
use crate::dedup::exact_key;

/// One instruction-tuning example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionRecord {
    pub id: String,
    pub instruction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub output: String,
    /// Name of the dataset the record was collected from.
    pub source: String,
}

impl InstructionRecord {
    pub fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.instruction.trim().is_empty() {
            return Err(format!("record {}: empty instruction", self.id));
        }
        Ok(())
    }
}

/// Instruction, input and output joined by newlines; the unit of both
/// duplicate detection and domain scoring.
pub fn instruction_text(r: &InstructionRecord) -> String {
    let mut s = r.instruction.clone();
    if let Some(input) = &r.input {
        s.push('\n');
        s.push_str(input);
    }
    s.push('\n');
    s.push_str(&r.output);
    s
}

/// Per-dataset counts before deduplication, followed by the two totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionSummary {
    /// `(source, records)` in source-name order.
    pub sources: Vec<(String, u64)>,
    pub total: u64,
    pub total_after_dedup: u64,
}

impl InstructionSummary {
    pub fn new(input: &[InstructionRecord], survivors: &[InstructionRecord]) -> Self {
        let mut by_source: BTreeMap<&str, u64> = BTreeMap::new();
        for r in input {
            *by_source.entry(&r.source).or_default() += 1;
        }
        InstructionSummary {
            sources: by_source.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            total: input.len() as u64,
            total_after_dedup: survivors.len() as u64,
        }
    }
}

/// Removes exact duplicates (whitespace- and case-insensitive over the joined
/// text, first occurrence kept), then records whose lexicon score falls below
/// `threshold`.
///
/// The report counts records as documents and reference tokens of the joined
/// text as tokens; reasons are `exact_duplicate` and `non_financial`.
pub fn dedup_instructions<S: AsRef<str>>(
    records: Vec<InstructionRecord>,
    domain_lexicon: &[S],
    threshold: f64,
) -> (Vec<InstructionRecord>, StageReport) {
    let scorer = LexiconScorer::new(domain_lexicon);
    let mut report = StageReport::empty(Stage::ExactDedup);
    let mut seen = HashSet::with_capacity(records.len());
    let mut survivors = Vec::with_capacity(records.len());
    for r in records {
        let text = instruction_text(&r);
        let tokens = count_tokens(&text) as u64;
        report.docs_in += 1;
        report.tokens_in += tokens;
        if !seen.insert(exact_key(&text)) {
            report.drop_doc("exact_duplicate");
        } else if scorer.score(&text) < threshold {
            report.drop_doc("non_financial");
        } else {
            report.docs_out += 1;
            report.tokens_out += tokens;
            survivors.push(r);
        }
    }
    (survivors, report)
}
