use std::collections::{HashMap, HashSet};
use std::io::Write;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BuilderError;
use crate::corpus::tokenize;
use crate::rng::item_rng;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDefinition {
    pub term: String,
    pub definition: String,
}

/// A definition question with one true option and `k` distractors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McqItem {
    pub term: String,
    pub question: String,
    pub options: Vec<String>,
    pub correct_index: usize,
    pub distractor_terms: Vec<String>,
}

pub fn mcq_question(term: &str) -> String {
    format!("What is the definition of '{term}' in the financial domain?")
}

/// Pairwise similarity between the definitions of a glossary.
pub trait Similarity: Sync {
    /// Similarity of definition `i` to every definition, indexed like the
    /// glossary.
    fn row(&self, i: usize) -> Vec<f64>;
}

/// Cosine similarity of L2-normalized tf-idf vectors over casefolded
/// reference tokens that contain a letter or digit. Uses the smoothed
/// `idf = ln((1 + N) / (1 + df)) + 1`.
#[derive(Debug, Clone)]
pub struct TfIdfSimilarity {
    /// Sparse vectors sorted by term id.
    vectors: Vec<Vec<(u32, f64)>>,
}

impl TfIdfSimilarity {
    pub fn fit<S: AsRef<str>>(texts: &[S]) -> Self {
        let mut vocab: HashMap<String, u32> = HashMap::new();
        let counts: Vec<HashMap<u32, f64>> = texts
            .iter()
            .map(|t| {
                let mut tf = HashMap::new();
                for tok in tokenize(t.as_ref()) {
                    if !tok.chars().any(char::is_alphanumeric) {
                        continue;
                    }
                    let next = vocab.len() as u32;
                    let id = *vocab.entry(tok.to_lowercase()).or_insert(next);
                    *tf.entry(id).or_insert(0.0) += 1.0;
                }
                tf
            })
            .collect();
        let mut df = vec![0u32; vocab.len()];
        for tf in &counts {
            for &id in tf.keys() {
                df[id as usize] += 1;
            }
        }
        let n = texts.len() as f64;
        let idf: Vec<f64> = df.iter().map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0).collect();
        let vectors = counts
            .into_iter()
            .map(|tf| {
                let mut v: Vec<(u32, f64)> = tf.into_iter().map(|(id, c)| (id, c * idf[id as usize])).collect();
                v.sort_by_key(|&(id, _)| id);
                let norm = v.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
                if norm > 0.0 {
                    v.iter_mut().for_each(|(_, w)| *w /= norm);
                }
                v
            })
            .collect();
        TfIdfSimilarity { vectors }
    }

    pub fn cosine(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.vectors[i], &self.vectors[j]);
        let (mut x, mut y, mut dot) = (0, 0, 0.0);
        while x < a.len() && y < b.len() {
            match a[x].0.cmp(&b[y].0) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    dot += a[x].1 * b[y].1;
                    x += 1;
                    y += 1;
                }
            }
        }
        dot
    }
}

impl Similarity for TfIdfSimilarity {
    fn row(&self, i: usize) -> Vec<f64> {
        (0..self.vectors.len()).map(|j| self.cosine(i, j)).collect()
    }
}

fn validate(glossary: &[TermDefinition], k: usize) -> Result<(), BuilderError> {
    if glossary.len() < k + 1 {
        return Err(BuilderError::GlossaryTooSmall { need: k + 1, got: glossary.len() });
    }
    let mut seen = HashSet::with_capacity(glossary.len());
    for (index, e) in glossary.iter().enumerate() {
        if e.term.trim().is_empty() || e.definition.trim().is_empty() {
            return Err(BuilderError::EmptyEntry { index });
        }
        if !seen.insert(e.term.as_str()) {
            return Err(BuilderError::DuplicateTerm(e.term.clone()));
        }
    }
    Ok(())
}

/// One item per glossary entry, in glossary order. Distractors are the `k`
/// definitions most similar to the true one under tf-idf cosine, ties broken
/// by term; options are shuffled per item under `seed`.
pub fn build_mcq(glossary: &[TermDefinition], k: usize, seed: u64) -> Result<Vec<McqItem>, BuilderError> {
    validate(glossary, k)?;
    let defs: Vec<&str> = glossary.iter().map(|e| e.definition.as_str()).collect();
    build_mcq_with(glossary, k, seed, &TfIdfSimilarity::fit(&defs))
}

/// [`build_mcq`] with a caller-supplied similarity.
///
/// Definitions whose text equals the true definition or an already selected
/// distractor are passed over so that options stay pairwise distinct.
pub fn build_mcq_with(
    glossary: &[TermDefinition],
    k: usize,
    seed: u64,
    similarity: &dyn Similarity,
) -> Result<Vec<McqItem>, BuilderError> {
    validate(glossary, k)?;
    glossary
        .par_iter()
        .enumerate()
        .map(|(i, entry)| {
            let sims = similarity.row(i);
            let mut order: Vec<usize> = (0..glossary.len()).filter(|&j| j != i).collect();
            order.sort_by(|&a, &b| {
                sims[b]
                    .total_cmp(&sims[a])
                    .then_with(|| glossary[a].term.cmp(&glossary[b].term))
            });
            let mut options = vec![entry.definition.clone()];
            let mut distractor_terms = Vec::with_capacity(k);
            for j in order {
                if distractor_terms.len() == k {
                    break;
                }
                if !options.contains(&glossary[j].definition) {
                    options.push(glossary[j].definition.clone());
                    distractor_terms.push(glossary[j].term.clone());
                }
            }
            if distractor_terms.len() < k {
                return Err(BuilderError::NotEnoughDistinct {
                    term: entry.term.clone(),
                    available: distractor_terms.len(),
                    need: k,
                });
            }
            let mut rng = item_rng(seed, i as u64);
            let mut perm: Vec<usize> = (0..options.len()).collect();
            perm.shuffle(&mut rng);
            let correct_index = perm.iter().position(|&p| p == 0).expect("permutation");
            Ok(McqItem {
                term: entry.term.clone(),
                question: mcq_question(&entry.term),
                options: perm.into_iter().map(|p| options[p].clone()).collect(),
                correct_index,
                distractor_terms,
            })
        })
        .collect()
}

fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_field(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape \\{}", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}

/// Writes `term<TAB>question<TAB>opt0..optN<TAB>correct_index` rows. Tabs,
/// newlines and backslashes inside fields are backslash-escaped.
pub fn write_mcq_tsv<W: Write>(items: &[McqItem], w: &mut W) -> std::io::Result<()> {
    for it in items {
        let mut fields = vec![escape_field(&it.term), escape_field(&it.question)];
        fields.extend(it.options.iter().map(|o| escape_field(o)));
        fields.push(it.correct_index.to_string());
        writeln!(w, "{}", fields.join("\t"))?;
    }
    Ok(())
}

/// Reads rows written by [`write_mcq_tsv`]. The format carries no distractor
/// terms, so those come back empty.
pub fn read_mcq_tsv(text: &str) -> Result<Vec<McqItem>, BuilderError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let bad = |reason: String| BuilderError::MalformedRow { line: i + 1, reason };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 4 {
                return Err(bad(format!("{} fields, need at least 4", fields.len())));
            }
            let n_opts = fields.len() - 3;
            let correct_index: usize = fields[fields.len() - 1]
                .parse()
                .map_err(|_| bad("correct_index is not an integer".into()))?;
            if correct_index >= n_opts {
                return Err(bad(format!("correct_index {correct_index} out of range")));
            }
            let un = |s: &str| unescape_field(s).map_err(bad);
            Ok(McqItem {
                term: un(fields[0])?,
                question: un(fields[1])?,
                options: fields[2..fields.len() - 1].iter().map(|f| un(f)).collect::<Result<_, _>>()?,
                correct_index,
                distractor_terms: Vec::new(),
            })
        })
        .collect()
}
