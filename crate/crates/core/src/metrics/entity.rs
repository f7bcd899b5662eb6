use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::MetricError;

/// A labeled token span, `end` exclusive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

impl EntitySpan {
    pub fn new(start: usize, end: usize, label: impl Into<String>) -> Self {
        EntitySpan { start, end, label: label.into() }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.start >= self.end {
            return Err(format!("span [{}, {}) is empty or reversed", self.start, self.end));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrfScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Micro-averaged precision, recall and F1 over exact `(span, label)` tuples,
/// counted per document (duplicates within a document count once).
///
/// With no predicted and no gold spans anywhere all three are 1. A zero
/// denominator otherwise yields 0 for that component.
pub fn entity_f1(pred: &[Vec<EntitySpan>], gold: &[Vec<EntitySpan>]) -> Result<PrfScores, MetricError> {
    if pred.len() != gold.len() {
        return Err(MetricError::LengthMismatch { pred: pred.len(), gold: gold.len() });
    }
    let (mut tp, mut n_pred, mut n_gold) = (0usize, 0usize, 0usize);
    for (p, g) in pred.iter().zip(gold) {
        let p: BTreeSet<&EntitySpan> = p.iter().collect();
        let g: BTreeSet<&EntitySpan> = g.iter().collect();
        tp += p.intersection(&g).count();
        n_pred += p.len();
        n_gold += g.len();
    }
    if n_pred == 0 && n_gold == 0 {
        return Ok(PrfScores { precision: 1.0, recall: 1.0, f1: 1.0 });
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, n_pred);
    let recall = ratio(tp, n_gold);
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Ok(PrfScores { precision, recall, f1 })
}
