//! Near-duplicate removal with MinHash signatures and LSH banding, and exact
//! removal by normalized content hash. Both keep the earliest document of
//! every duplicate group.

mod cache;
mod exact;
mod fuzzy;
mod lsh;
mod minhash;
mod shingle;

use serde::{Deserialize, Serialize};

pub use cache::SignatureCache;
pub use exact::{exact_dedup, exact_key, normalize_for_exact};
pub use fuzzy::{fuzzy_dedup, fuzzy_dedup_cached, fuzzy_drop_mask};
pub use lsh::lsh_candidates;
pub use minhash::{estimate_jaccard, minhash_signature, MinHashSignature, MinHasher};
pub use shingle::{shingle, shingle_hashes};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DedupError {
    #[error("invalid dedup config: {0}")]
    Config(String),
    #[error("signatures are not comparable: {0}")]
    Mismatch(String),
    #[error("signature cache: {0}")]
    Cache(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DedupConfig {
    /// Words per shingle.
    pub shingle_w: usize,
    pub num_hashes: usize,
    pub lsh_bands: usize,
    pub lsh_rows: usize,
    pub jaccard_threshold: f64,
    pub seed: u64,
}

impl Default for DedupConfig {
    fn default() -> Self {
        DedupConfig {
            shingle_w: 5,
            num_hashes: 128,
            lsh_bands: 16,
            lsh_rows: 8,
            jaccard_threshold: 0.8,
            seed: 0,
        }
    }
}

impl DedupConfig {
    pub fn validate(&self) -> Result<(), DedupError> {
        if self.shingle_w == 0 {
            return Err(DedupError::Config("shingle_w must be >= 1".into()));
        }
        if self.num_hashes == 0 {
            return Err(DedupError::Config("num_hashes must be >= 1".into()));
        }
        if self.lsh_bands * self.lsh_rows != self.num_hashes {
            return Err(DedupError::Config(format!(
                "lsh_bands ({}) x lsh_rows ({}) must equal num_hashes ({})",
                self.lsh_bands, self.lsh_rows, self.num_hashes
            )));
        }
        if !(self.jaccard_threshold > 0.0 && self.jaccard_threshold <= 1.0) {
            return Err(DedupError::Config(format!(
                "jaccard_threshold {} outside (0, 1]",
                self.jaccard_threshold
            )));
        }
        Ok(())
    }
}
