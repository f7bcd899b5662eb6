//! Character-trigram language identification with the rank-order
//! ("out-of-place") profile distance.

use std::collections::HashMap;

use super::{CurationError, Verdict};

pub const UNDETERMINED: &str = "und";
const PROFILE_SIZE: usize = 300;
const MIN_CHARS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct LangProfile {
    pub language: String,
    /// Trigram to rank, ranks `1..=len`.
    pub trigram_ranks: HashMap<String, usize>,
    /// Mean distance of sentence-sized windows of the training sample to this
    /// profile: the distance typical of in-language text.
    pub reference_distance: f64,
}

impl LangProfile {
    /// Profile of the `PROFILE_SIZE` most frequent trigrams in `sample`.
    pub fn train(language: &str, sample: &str) -> Self {
        let ranks: HashMap<String, usize> = ranked_trigrams(sample)
            .into_iter()
            .take(PROFILE_SIZE)
            .enumerate()
            .map(|(i, (t, _))| (t, i + 1))
            .collect();
        let mut profile = LangProfile {
            language: language.to_string(),
            trigram_ranks: ranks,
            reference_distance: 0.0,
        };
        let windows: Vec<f64> = sentences(sample)
            .filter(|s| s.chars().count() >= MIN_CHARS)
            .map(|s| distance(&doc_ranks(s), &profile))
            .collect();
        if !windows.is_empty() {
            profile.reference_distance = windows.iter().sum::<f64>() / windows.len() as f64;
        }
        profile
    }

    /// Distance rescaled so that `reference_distance` maps to 0 and the
    /// maximum distance to 1.
    fn normalize(&self, d: f64) -> f64 {
        if self.reference_distance >= 1.0 {
            return 1.0;
        }
        ((d - self.reference_distance) / (1.0 - self.reference_distance)).clamp(0.0, 1.0)
    }

    pub fn len(&self) -> usize {
        self.trigram_ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trigram_ranks.is_empty()
    }
}

/// Profiles trained on the sample texts shipped with the crate.
pub fn builtin_profiles() -> Vec<LangProfile> {
    vec![
        LangProfile::train("en", include_str!("../../data/lang_en.txt")),
        LangProfile::train("de", include_str!("../../data/lang_de.txt")),
        LangProfile::train("fr", include_str!("../../data/lang_fr.txt")),
        LangProfile::train("es", include_str!("../../data/lang_es.txt")),
    ]
}

fn trigram_counts(text: &str) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    let cleaned: String = text
        .chars()
        .map(|c| if c.is_alphabetic() { c } else { ' ' })
        .flat_map(char::to_lowercase)
        .collect();
    for word in cleaned.split_whitespace() {
        let padded: Vec<char> = std::iter::once(' ')
            .chain(word.chars())
            .chain(std::iter::once(' '))
            .collect();
        for w in padded.windows(3) {
            *counts.entry(w.iter().collect::<String>()).or_insert(0) += 1;
        }
    }
    counts
}

fn sentences(text: &str) -> impl Iterator<Item = &str> {
    text.split_inclusive(['.', '!', '?', '\n']).map(str::trim)
}

/// Trigrams by descending count, ties in lexicographic order.
fn ranked_trigrams(text: &str) -> Vec<(String, usize)> {
    let mut v: Vec<(String, usize)> = trigram_counts(text).into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Document ranks with tied trigrams sharing their average rank, as a
/// fraction of the document profile length.
fn doc_ranks(text: &str) -> Vec<(String, f64)> {
    let ranked: Vec<(String, usize)> = ranked_trigrams(text).into_iter().take(PROFILE_SIZE).collect();
    let n = ranked.len() as f64;
    let mut out = Vec::with_capacity(ranked.len());
    let mut i = 0;
    while i < ranked.len() {
        let mut j = i;
        while j < ranked.len() && ranked[j].1 == ranked[i].1 {
            j += 1;
        }
        let mid = (i + j) as f64 / 2.0;
        for (t, _) in &ranked[i..j] {
            out.push((t.clone(), mid / n));
        }
        i = j;
    }
    out
}

/// Out-of-place distance in [0, 1]: each document trigram costs the gap
/// between its relative rank here and in the profile, or 1 when the profile
/// lacks it.
fn distance(doc: &[(String, f64)], profile: &LangProfile) -> f64 {
    if doc.is_empty() || profile.is_empty() {
        return 1.0;
    }
    let np = profile.len() as f64;
    let total: f64 = doc
        .iter()
        .map(|(t, r)| match profile.trigram_ranks.get(t) {
            Some(&pr) => (r - (pr as f64 - 0.5) / np).abs(),
            None => 1.0,
        })
        .sum();
    total / doc.len() as f64
}

/// Closest profile by out-of-place distance, with confidence
/// `1 - normalized distance` against that profile.
/// Texts shorter than 20 characters are `("und", 0.0)`.
pub fn detect_language(text: &str, profiles: &[LangProfile]) -> Result<(String, f64), CurationError> {
    if profiles.is_empty() {
        return Err(CurationError::Config("no language profiles".into()));
    }
    if text.chars().count() < MIN_CHARS {
        return Ok((UNDETERMINED.to_string(), 0.0));
    }
    let doc = doc_ranks(text);
    if doc.is_empty() {
        return Ok((UNDETERMINED.to_string(), 0.0));
    }
    let (best, d) = profiles
        .iter()
        .map(|p| (p, distance(&doc, p)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.language.cmp(&b.0.language)))
        .expect("non-empty");
    Ok((best.language.clone(), 1.0 - best.normalize(d)))
}

pub(crate) fn lang_verdict(code: &str, confidence: f64, target: &str, min_conf: f64) -> Verdict {
    if code == UNDETERMINED {
        Verdict::Drop("lang_undetermined")
    } else if code != target {
        Verdict::Drop("lang_mismatch")
    } else if confidence < min_conf {
        Verdict::Drop("lang_low_confidence")
    } else {
        Verdict::Keep
    }
}
