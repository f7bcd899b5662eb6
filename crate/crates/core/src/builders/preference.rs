use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::item_rng;

/// A candidate response for the rejected side of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Candidate {
    /// Bare text; its source is reported as `candidate_<position>`.
    Text(String),
    Sourced { text: String, source: String },
}

impl Candidate {
    pub fn text(&self) -> &str {
        match self {
            Candidate::Text(t) => t,
            Candidate::Sourced { text, .. } => text,
        }
    }

    fn source(&self, position: usize) -> String {
        match self {
            Candidate::Text(_) => format!("candidate_{position}"),
            Candidate::Sourced { source, .. } => source.clone(),
        }
    }
}

/// Input to the preference builder: a prompt, the preferred response and the
/// pool of responses to draw the rejected one from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceItem {
    pub prompt: String,
    #[serde(alias = "chosen_output")]
    pub chosen: String,
    #[serde(default = "default_chosen_source")]
    pub chosen_source: String,
    #[serde(alias = "rejected_candidates")]
    pub candidates: Vec<Candidate>,
}

fn default_chosen_source() -> String {
    "chosen".to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferencePair {
    pub prompt: String,
    pub chosen: String,
    pub rejected: String,
    pub chosen_source: String,
    pub rejected_source: String,
}

/// An item that could not be turned into a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemError {
    pub index: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceOutcome {
    /// Pairs in input order.
    pub pairs: Vec<PreferencePair>,
    /// Skipped items by reason.
    pub skipped: BTreeMap<String, u64>,
    pub errors: Vec<ItemError>,
}

enum ItemResult {
    Pair(PreferencePair),
    Skip(&'static str),
    Error(String),
}

fn build_one(index: usize, item: &PreferenceItem, seed: u64) -> ItemResult {
    if item.candidates.is_empty() {
        return ItemResult::Error("no rejected candidates".into());
    }
    if item.prompt.trim().is_empty() || item.chosen.trim().is_empty() {
        return ItemResult::Error("empty prompt or chosen response".into());
    }
    let eligible: Vec<(usize, &Candidate)> = item
        .candidates
        .iter()
        .enumerate()
        .filter(|(_, c)| c.text() != item.chosen && !c.text().trim().is_empty())
        .collect();
    if eligible.is_empty() {
        return ItemResult::Skip("degenerate");
    }
    let mut rng = item_rng(seed, index as u64);
    let (pos, cand) = eligible[rng.gen_range(0..eligible.len())];
    ItemResult::Pair(PreferencePair {
        prompt: item.prompt.clone(),
        chosen: item.chosen.clone(),
        rejected: cand.text().to_string(),
        chosen_source: item.chosen_source.clone(),
        rejected_source: cand.source(pos),
    })
}

/// Pairs each item's chosen response with one candidate drawn uniformly from
/// those that differ from it and are non-empty.
///
/// Items whose every candidate equals the chosen response are skipped with
/// reason `degenerate`; items without candidates become error records.
pub fn build_preference_pairs(items: &[PreferenceItem], seed: u64) -> PreferenceOutcome {
    let results: Vec<ItemResult> = items
        .par_iter()
        .enumerate()
        .map(|(i, item)| build_one(i, item, seed))
        .collect();
    let mut out = PreferenceOutcome::default();
    for (index, r) in results.into_iter().enumerate() {
        match r {
            ItemResult::Pair(p) => out.pairs.push(p),
            ItemResult::Skip(reason) => *out.skipped.entry(reason.to_string()).or_default() += 1,
            ItemResult::Error(message) => out.errors.push(ItemError { index, message }),
        }
    }
    out
}
