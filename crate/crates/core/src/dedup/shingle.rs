use std::collections::BTreeSet;

use xxhash_rust::xxh3::xxh3_64;

use crate::corpus::tokenize;

fn lowered_tokens(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(str::to_lowercase).collect()
}

/// Word w-grams over lowercased corpus tokens, joined by single spaces.
/// Fewer than `w` tokens gives the empty set.
pub fn shingle(text: &str, w: usize) -> BTreeSet<String> {
    assert!(w >= 1, "shingle width must be >= 1");
    lowered_tokens(text).windows(w).map(|win| win.join(" ")).collect()
}

/// 64-bit hashes of the distinct shingles, sorted.
pub fn shingle_hashes(text: &str, w: usize) -> Vec<u64> {
    assert!(w >= 1, "shingle width must be >= 1");
    let toks = lowered_tokens(text);
    let mut out: Vec<u64> = toks
        .windows(w)
        .map(|win| xxh3_64(win.join(" ").as_bytes()))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}
