use rayon::prelude::*;

use super::{
    estimate_jaccard, lsh_candidates, shingle_hashes, DedupConfig, DedupError, MinHashSignature,
    MinHasher, SignatureCache,
};
use crate::corpus::{Document, Stage, StageReport};

/// Union-find whose representative is always the smallest index.
struct MinRootSets {
    parent: Vec<usize>,
}

impl MinRootSets {
    fn new(n: usize) -> Self {
        MinRootSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// For each signature, whether it is dropped: candidate pairs whose estimate
/// reaches the threshold are linked, and each linked group keeps only its
/// earliest member. The result depends only on the signatures, never on
/// evaluation order.
pub fn fuzzy_drop_mask(signatures: &[MinHashSignature], config: &DedupConfig) -> Vec<bool> {
    let candidates: Vec<(usize, usize)> = lsh_candidates(signatures, config).into_iter().collect();
    let edges: Vec<(usize, usize)> = candidates
        .into_par_iter()
        .filter(|&(i, j)| {
            estimate_jaccard(&signatures[i], &signatures[j])
                .map(|j| j >= config.jaccard_threshold)
                .unwrap_or(false)
        })
        .collect();
    let mut sets = MinRootSets::new(signatures.len());
    for (i, j) in edges {
        sets.union(i, j);
    }
    (0..signatures.len()).map(|i| sets.find(i) != i).collect()
}

fn signatures_for(docs: &[Document], config: &DedupConfig) -> Vec<MinHashSignature> {
    let hasher = MinHasher::from_config(config);
    docs.par_iter()
        .map(|d| hasher.sign_hashes(&d.id, &shingle_hashes(&d.text, config.shingle_w)))
        .collect()
}

fn apply_mask(docs: Vec<Document>, drop: &[bool]) -> (Vec<Document>, StageReport) {
    let mut report = StageReport::begin(Stage::FuzzyDedup, &docs);
    let mut survivors = Vec::with_capacity(docs.len());
    for (d, &dropped) in docs.into_iter().zip(drop) {
        if dropped {
            report.drop_doc("near_duplicate");
        } else {
            survivors.push(d);
        }
    }
    let report = report.finish(&survivors);
    (survivors, report)
}

pub fn fuzzy_dedup(docs: Vec<Document>, config: &DedupConfig) -> Result<(Vec<Document>, StageReport), DedupError> {
    config.validate()?;
    let sigs = signatures_for(&docs, config);
    let drop = fuzzy_drop_mask(&sigs, config);
    Ok(apply_mask(docs, &drop))
}

/// Like [`fuzzy_dedup`], reusing signatures from `cache` where the document
/// text is unchanged and storing the ones it computes.
pub fn fuzzy_dedup_cached(
    docs: Vec<Document>,
    config: &DedupConfig,
    cache: &mut SignatureCache,
) -> Result<(Vec<Document>, StageReport), DedupError> {
    config.validate()?;
    let hasher = MinHasher::from_config(config);
    let sigs: Vec<MinHashSignature> = docs
        .par_iter()
        .map(|d| {
            cache.lookup(d).unwrap_or_else(|| {
                hasher.sign_hashes(&d.id, &shingle_hashes(&d.text, config.shingle_w))
            })
        })
        .collect();
    for (d, s) in docs.iter().zip(&sigs) {
        cache.store(d, s);
    }
    let drop = fuzzy_drop_mask(&sigs, config);
    Ok(apply_mask(docs, &drop))
}
