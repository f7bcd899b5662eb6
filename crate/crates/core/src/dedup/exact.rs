use std::collections::HashSet;

use xxhash_rust::xxh3::xxh3_128;

use crate::corpus::{Document, Stage, StageReport};

/// Casefold and collapse whitespace runs to single spaces.
pub fn normalize_for_exact(text: &str) -> String {
    text.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// 128-bit hash of the normalized text.
pub fn exact_key(text: &str) -> u128 {
    xxh3_128(normalize_for_exact(text).as_bytes())
}

/// Drops every document whose normalized content was already seen earlier in
/// the sequence.
pub fn exact_dedup(docs: Vec<Document>) -> (Vec<Document>, StageReport) {
    let mut report = StageReport::begin(Stage::ExactDedup, &docs);
    let mut seen = HashSet::with_capacity(docs.len());
    let mut survivors = Vec::with_capacity(docs.len());
    for d in docs {
        if seen.insert(exact_key(&d.text)) {
            survivors.push(d);
        } else {
            report.drop_doc("exact_duplicate");
        }
    }
    let report = report.finish(&survivors);
    (survivors, report)
}
