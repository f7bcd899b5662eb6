use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_lengths, MetricError, PrfScores};
use crate::corpus::tokenize;

/// Per-pair precision/recall/F1 for the three variants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougePair {
    pub rouge1: PrfScores,
    pub rouge2: PrfScores,
    pub rouge_l: PrfScores,
}

/// Corpus scores: means of per-pair F-measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScores {
    pub rouge1: f64,
    pub rouge2: f64,
    pub rouge_l: f64,
    pub n: usize,
    /// Pairs whose reference had no tokens; they score 0.
    pub empty_references: usize,
}

const ZERO: PrfScores = PrfScores { precision: 0.0, recall: 0.0, f1: 0.0 };

fn prf(overlap: usize, n_cand: usize, n_ref: usize) -> PrfScores {
    if n_cand == 0 && n_ref == 0 {
        // Neither side has n-grams of this order (both texts shorter than n).
        return PrfScores { precision: 1.0, recall: 1.0, f1: 1.0 };
    }
    if n_cand == 0 || n_ref == 0 || overlap == 0 {
        return ZERO;
    }
    let p = overlap as f64 / n_cand as f64;
    let r = overlap as f64 / n_ref as f64;
    PrfScores { precision: p, recall: r, f1: 2.0 * p * r / (p + r) }
}

fn grams(t: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut m = HashMap::new();
    if t.len() >= n {
        for w in t.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

fn ngram_overlap(c: &[String], r: &[String], n: usize) -> PrfScores {
    let (gc, gr) = (grams(c, n), grams(r, n));
    let overlap = gc.iter().map(|(g, &k)| k.min(gr.get(g).copied().unwrap_or(0))).sum();
    prf(overlap, c.len().saturating_sub(n - 1), r.len().saturating_sub(n - 1))
}

/// Length of the longest common subsequence.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn tokens(s: &str) -> Vec<String> {
    tokenize(s).into_iter().map(str::to_lowercase).collect()
}

/// ROUGE-1, ROUGE-2 and ROUGE-L of one candidate against one reference, on
/// casefolded reference tokens without stemming or stopword removal. An empty
/// reference scores 0 throughout.
pub fn rouge_pair(candidate: &str, reference: &str) -> RougePair {
    let (c, r) = (tokens(candidate), tokens(reference));
    if r.is_empty() {
        return RougePair { rouge1: ZERO, rouge2: ZERO, rouge_l: ZERO };
    }
    RougePair {
        rouge1: ngram_overlap(&c, &r, 1),
        rouge2: ngram_overlap(&c, &r, 2),
        rouge_l: prf(lcs_len(&c, &r), c.len(), r.len()),
    }
}

pub fn rouge<C: AsRef<str> + Sync, R: AsRef<str> + Sync>(
    candidates: &[C],
    references: &[R],
) -> Result<RougeScores, MetricError> {
    check_lengths(candidates.len(), references.len())?;
    let pairs: Vec<(RougePair, bool)> = candidates
        .par_iter()
        .zip(references)
        .map(|(c, r)| (rouge_pair(c.as_ref(), r.as_ref()), tokenize(r.as_ref()).is_empty()))
        .collect();
    let n = pairs.len();
    let mean = |f: fn(&RougePair) -> f64| pairs.iter().map(|(p, _)| f(p)).sum::<f64>() / n as f64;
    Ok(RougeScores {
        rouge1: mean(|p| p.rouge1.f1),
        rouge2: mean(|p| p.rouge2.f1),
        rouge_l: mean(|p| p.rouge_l.f1),
        n,
        empty_references: pairs.iter().filter(|(_, e)| *e).count(),
    })
}
