use std::collections::{BTreeSet, HashMap};

use super::{DedupConfig, MinHashSignature};

/// Index pairs `(i, j)`, `i < j`, whose signatures agree on every row of at
/// least one band. Empty signatures never become candidates.
pub fn lsh_candidates(signatures: &[MinHashSignature], config: &DedupConfig) -> BTreeSet<(usize, usize)> {
    let rows = config.lsh_rows;
    let mut pairs = BTreeSet::new();
    for band in 0..config.lsh_bands {
        let lo = band * rows;
        let hi = lo + rows;
        let mut buckets: HashMap<&[u64], Vec<usize>> = HashMap::new();
        for (i, sig) in signatures.iter().enumerate() {
            if sig.is_empty() || sig.values.len() < hi {
                continue;
            }
            buckets.entry(&sig.values[lo..hi]).or_default().push(i);
        }
        for members in buckets.values().filter(|m| m.len() > 1) {
            for (k, &i) in members.iter().enumerate() {
                for &j in &members[k + 1..] {
                    pairs.insert((i, j));
                }
            }
        }
    }
    pairs
}
