use std::collections::{BTreeMap, HashSet};

use chrono::NaiveDate;

use super::{rank, RetrievalConfig, RetrievalError, SearchHit};
use crate::corpus::{tokenize, Document};

/// Casefolded reference tokens that contain a letter or digit. Punctuation
/// tokens are neither indexed nor counted in document length.
pub fn index_terms(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedDoc {
    pub id: String,
    pub text: String,
    pub date: Option<NaiveDate>,
    /// Number of indexed terms.
    pub len: u32,
}

/// Inverted index with the corpus statistics BM25 needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Index {
    pub(crate) docs: Vec<IndexedDoc>,
    /// Term to `(doc position, term frequency)`, positions ascending.
    pub(crate) postings: BTreeMap<String, Vec<(u32, u32)>>,
    pub(crate) total_len: u64,
}

impl Index {
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn avgdl(&self) -> f64 {
        if self.docs.is_empty() {
            0.0
        } else {
            self.total_len as f64 / self.docs.len() as f64
        }
    }

    pub fn df(&self, term: &str) -> usize {
        self.postings.get(&term.to_lowercase()).map_or(0, Vec::len)
    }

    /// `ln(1 + (N - df + 0.5) / (df + 0.5))`, positive for every df.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.docs.len() as f64;
        let df = self.df(term) as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    pub fn docs(&self) -> &[IndexedDoc] {
        &self.docs
    }

    pub fn get(&self, id: &str) -> Option<&IndexedDoc> {
        self.docs.iter().find(|d| d.id == id)
    }

    pub fn vocabulary_size(&self) -> usize {
        self.postings.len()
    }

    pub(crate) fn from_parts(docs: Vec<IndexedDoc>, postings: BTreeMap<String, Vec<(u32, u32)>>) -> Self {
        let total_len = docs.iter().map(|d| d.len as u64).sum();
        Index { docs, postings, total_len }
    }
}

pub fn index_documents(docs: &[Document]) -> Result<Index, RetrievalError> {
    let mut seen = HashSet::with_capacity(docs.len());
    let mut index = Index::default();
    for (pos, d) in docs.iter().enumerate() {
        if !seen.insert(d.id.as_str()) {
            return Err(RetrievalError::DuplicateId(d.id.clone()));
        }
        let terms = index_terms(&d.text);
        let mut tf: BTreeMap<String, u32> = BTreeMap::new();
        for t in &terms {
            *tf.entry(t.clone()).or_default() += 1;
        }
        for (t, c) in tf {
            index.postings.entry(t).or_default().push((pos as u32, c));
        }
        index.total_len += terms.len() as u64;
        index.docs.push(IndexedDoc {
            id: d.id.clone(),
            text: d.text.clone(),
            date: d.date,
            len: terms.len() as u32,
        });
    }
    Ok(index)
}

/// BM25 over the distinct query terms, restricted to the configured date
/// window. Only documents containing at least one query term are returned.
pub fn bm25_search(index: &Index, query: &str, config: &RetrievalConfig) -> Vec<SearchHit> {
    let mut terms = index_terms(query);
    terms.sort();
    terms.dedup();
    if terms.is_empty() || index.is_empty() {
        return Vec::new();
    }
    let avgdl = index.avgdl();
    let mut scores: BTreeMap<u32, f64> = BTreeMap::new();
    for t in &terms {
        let Some(postings) = index.postings.get(t) else { continue };
        let idf = index.idf(t);
        for &(pos, tf) in postings {
            let doc = &index.docs[pos as usize];
            if !config.admits(doc.date) {
                continue;
            }
            let tf = tf as f64;
            let norm = if avgdl > 0.0 { doc.len as f64 / avgdl } else { 0.0 };
            let s = idf * tf * (config.k1 + 1.0) / (tf + config.k1 * (1.0 - config.b + config.b * norm));
            *scores.entry(pos).or_default() += s;
        }
    }
    let hits = scores
        .into_iter()
        .map(|(pos, score)| SearchHit { id: index.docs[pos as usize].id.clone(), score })
        .collect();
    rank(hits, config.top_k)
}
