use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xxhash_rust::xxh3::xxh3_64;

use super::{DedupConfig, DedupError};

/// Mersenne prime 2^61 - 1; the universal-hash modulus.
const PRIME: u64 = (1 << 61) - 1;
/// Value of every coordinate for an empty shingle set.
pub const EMPTY_SENTINEL: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinHashSignature {
    pub doc_id: String,
    pub values: Vec<u64>,
    /// Seed of the hash family that produced the values.
    pub seed: u64,
}

impl MinHashSignature {
    /// True when computed from an empty shingle set.
    pub fn is_empty(&self) -> bool {
        self.values.iter().all(|&v| v == EMPTY_SENTINEL)
    }
}

/// Seed-derived family of `num_hashes` hash functions `(a*x + b) mod p`.
#[derive(Debug, Clone)]
pub struct MinHasher {
    coeffs: Vec<(u64, u64)>,
    seed: u64,
}

impl MinHasher {
    pub fn new(num_hashes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..num_hashes)
            .map(|_| (rng.gen_range(1..PRIME), rng.gen_range(0..PRIME)))
            .collect();
        MinHasher { coeffs, seed }
    }

    pub fn from_config(config: &DedupConfig) -> Self {
        Self::new(config.num_hashes, config.seed)
    }

    /// Signature of pre-hashed shingles (see [`super::shingle_hashes`]).
    pub fn sign_hashes(&self, doc_id: &str, hashes: &[u64]) -> MinHashSignature {
        let mut values = vec![EMPTY_SENTINEL; self.coeffs.len()];
        for &h in hashes {
            let x = (h % PRIME) as u128;
            for (v, &(a, b)) in values.iter_mut().zip(&self.coeffs) {
                let y = ((a as u128 * x + b as u128) % PRIME as u128) as u64;
                if y < *v {
                    *v = y;
                }
            }
        }
        MinHashSignature {
            doc_id: doc_id.to_string(),
            values,
            seed: self.seed,
        }
    }

    pub fn sign<'a, I>(&self, doc_id: &str, shingles: I) -> MinHashSignature
    where
        I: IntoIterator<Item = &'a String>,
    {
        let hashes: Vec<u64> = shingles.into_iter().map(|s| xxh3_64(s.as_bytes())).collect();
        self.sign_hashes(doc_id, &hashes)
    }
}

pub fn minhash_signature<'a, I>(doc_id: &str, shingles: I, config: &DedupConfig) -> MinHashSignature
where
    I: IntoIterator<Item = &'a String>,
{
    MinHasher::from_config(config).sign(doc_id, shingles)
}

/// Fraction of coordinates on which the two signatures agree. Two empty
/// signatures estimate 0: there is no evidence of shared content.
pub fn estimate_jaccard(a: &MinHashSignature, b: &MinHashSignature) -> Result<f64, DedupError> {
    if a.values.len() != b.values.len() {
        return Err(DedupError::Mismatch(format!(
            "lengths {} and {}",
            a.values.len(),
            b.values.len()
        )));
    }
    if a.seed != b.seed {
        return Err(DedupError::Mismatch(format!("seeds {} and {}", a.seed, b.seed)));
    }
    if a.values.is_empty() || a.is_empty() || b.is_empty() {
        return Ok(0.0);
    }
    let agree = a.values.iter().zip(&b.values).filter(|(x, y)| x == y).count();
    Ok(agree as f64 / a.values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(range: std::ops::Range<usize>) -> BTreeSet<String> {
        range.map(|i| format!("shingle-{i}")).collect()
    }

    #[test]
    fn deterministic_and_self_similar() {
        let cfg = DedupConfig::default();
        let a = minhash_signature("a", &set(0..40), &cfg);
        let b = minhash_signature("b", &set(0..40), &cfg);
        assert_eq!(a.values, b.values);
        assert_eq!(a.values.len(), 128);
        assert_eq!(estimate_jaccard(&a, &a).unwrap(), 1.0);
    }

    #[test]
    fn empty_set_is_flagged() {
        let cfg = DedupConfig::default();
        let e = minhash_signature("e", &BTreeSet::new(), &cfg);
        assert!(e.is_empty());
        assert_eq!(estimate_jaccard(&e, &e).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_signatures_error() {
        let a = minhash_signature("a", &set(0..5), &DedupConfig::default());
        let b = minhash_signature(
            "b",
            &set(0..5),
            &DedupConfig {
                seed: 9,
                ..Default::default()
            },
        );
        assert!(estimate_jaccard(&a, &b).is_err());
        let mut c = a.clone();
        c.values.pop();
        assert!(estimate_jaccard(&a, &c).is_err());
    }

    #[test]
    fn disjoint_sets_rarely_agree() {
        let mut failures = 0;
        for seed in 0..100 {
            let cfg = DedupConfig {
                seed,
                ..Default::default()
            };
            let a = minhash_signature("a", &set(0..50), &cfg);
            let b = minhash_signature("b", &set(50..100), &cfg);
            if estimate_jaccard(&a, &b).unwrap() > 0.1 {
                failures += 1;
            }
        }
        assert!(failures <= 1, "{failures} of 100 seeds exceeded 0.1");
    }

    #[test]
    fn half_subset_estimates_half() {
        // |A| / |B| = 0.5 with A inside B, so J = 0.5.
        let mut total = 0.0;
        for seed in 0..50 {
            let cfg = DedupConfig {
                seed,
                ..Default::default()
            };
            let a = minhash_signature("a", &set(0..40), &cfg);
            let b = minhash_signature("b", &set(0..80), &cfg);
            let est = estimate_jaccard(&a, &b).unwrap();
            assert!((est - 0.5).abs() <= 0.15, "seed {seed}: {est}");
            total += est;
        }
        assert!((total / 50.0 - 0.5).abs() < 0.03);
    }
}
