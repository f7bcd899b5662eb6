//! Seeded generators and brute-force oracles shared by the integration tests.
//! Oracles here are deliberately naive: pairwise loops, exact rationals and
//! string comparison, so they share no code path with the implementation.

#![allow(dead_code)]

use std::collections::BTreeSet;

use bigdecimal::BigDecimal;
use finset_core::corpus::{Document, Source};
use finset_core::toolcall::{Function, ToolExpr};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- sets

/// Two sets of distinct random hashes with exactly `inter` shared elements
/// and `only_a`/`only_b` exclusive ones.
pub fn set_pair(r: &mut ChaCha8Rng, inter: usize, only_a: usize, only_b: usize) -> (Vec<u64>, Vec<u64>) {
    let mut pool = BTreeSet::new();
    while pool.len() < inter + only_a + only_b {
        pool.insert(r.gen::<u64>());
    }
    let mut pool: Vec<u64> = pool.into_iter().collect();
    pool.shuffle(r);
    let shared = &pool[..inter];
    let a: Vec<u64> = shared.iter().chain(&pool[inter..inter + only_a]).copied().collect();
    let b: Vec<u64> = shared.iter().chain(&pool[inter + only_a..]).copied().collect();
    (a, b)
}

pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

// ---------------------------------------------------------------- corpora

/// Synthetic vocabulary word `i`.
fn word(i: usize) -> String {
    format!("w{i}")
}

pub fn random_text(r: &mut ChaCha8Rng, len: usize, vocab: usize) -> Vec<String> {
    (0..len).map(|_| word(r.gen_range(0..vocab))).collect()
}

/// Replaces `edits` random positions with fresh words.
pub fn mutate(r: &mut ChaCha8Rng, words: &[String], edits: usize, vocab: usize) -> Vec<String> {
    let mut out = words.to_vec();
    for _ in 0..edits {
        let i = r.gen_range(0..out.len());
        out[i] = word(r.gen_range(0..vocab));
    }
    out
}

/// Up to `max_docs` documents: fresh random texts, near-copies of earlier
/// documents with a random number of word edits, and exact copies with
/// altered case and spacing.
pub fn near_dup_corpus(seed: u64, max_docs: usize) -> Vec<Document> {
    let mut r = rng(seed);
    let n = r.gen_range(2..=max_docs);
    let mut texts: Vec<Vec<String>> = Vec::new();
    let mut docs = Vec::new();
    for i in 0..n {
        let roll: f64 = r.gen();
        let (text, words) = if texts.is_empty() || roll < 0.35 {
            let len = r.gen_range(40..120);
            let w = random_text(&mut r, len, 5000);
            (w.join(" "), w)
        } else if roll < 0.85 {
            let base = texts[r.gen_range(0..texts.len())].clone();
            let edits = r.gen_range(0..12);
            let w = mutate(&mut r, &base, edits, 5000);
            (w.join(" "), w)
        } else {
            let base = texts[r.gen_range(0..texts.len())].clone();
            let text = base.iter().map(|w| w.to_uppercase()).collect::<Vec<_>>().join("  \n ");
            (text, base)
        };
        texts.push(words);
        docs.push(Document::new(format!("doc{i:03}"), text, Source::Other));
    }
    docs
}

/// First-wins near-duplicate oracle on exact shingle Jaccard: a document is
/// dropped when some earlier kept document reaches `threshold`.
pub fn fuzzy_oracle(shingles: &[BTreeSet<String>], threshold: f64) -> Vec<bool> {
    let mut dropped = vec![false; shingles.len()];
    for j in 0..shingles.len() {
        if shingles[j].is_empty() {
            continue;
        }
        dropped[j] = (0..j).any(|i| !dropped[i] && !shingles[i].is_empty() && jaccard(&shingles[i], &shingles[j]) >= threshold);
    }
    dropped
}

/// Hash-free exact-duplicate oracle: compares casefolded, whitespace-collapsed
/// text against every earlier survivor.
pub fn exact_oracle(texts: &[&str]) -> Vec<bool> {
    let norm: Vec<String> = texts
        .iter()
        .map(|t| t.split_whitespace().map(|w| w.to_lowercase()).collect::<Vec<_>>().join(" "))
        .collect();
    let mut dropped = vec![false; texts.len()];
    for j in 0..texts.len() {
        dropped[j] = (0..j).any(|i| !dropped[i] && norm[i] == norm[j]);
    }
    dropped
}

const COMPANIES: &[&str] = &["Acme Corp", "the bank", "Globex", "the insurer", "Initech", "the fund", "Umbrella Holdings"];
const NOUNS: &[&str] = &[
    "revenue", "earnings", "net income", "operating margin", "dividend", "cash flow", "debt", "interest expense",
    "share price", "market value", "loan book", "capital ratio",
];
const VERBS: &[&str] = &["rose", "fell", "recovered", "declined", "improved", "stabilized", "increased"];
const PERIODS: &[&str] = &["the first quarter", "the second quarter", "the fiscal year", "the last six months"];

fn finance_sentence(r: &mut ChaCha8Rng) -> String {
    let c = COMPANIES.choose(r).unwrap();
    let n1 = NOUNS.choose(r).unwrap();
    let n2 = NOUNS.choose(r).unwrap();
    let v = VERBS.choose(r).unwrap();
    let p = PERIODS.choose(r).unwrap();
    let pct = r.gen_range(1..40);
    format!(
        "In {p}, {c} said that its {n1} {v} by {pct} percent, while analysts expect the {n2} of the company to \
         remain under pressure as investors watch the market and interest rates."
    )
}

/// Mixed synthetic corpus exercising every curation stage: financial English,
/// off-domain English, non-English text, blocked URLs, lines with contact
/// details, markup, short documents and duplicates.
pub fn pipeline_corpus(seed: u64, n: usize) -> Vec<Document> {
    let mut r = rng(seed);
    let sources = [Source::C4, Source::News, Source::Sec, Source::Social, Source::Press];
    let mut docs: Vec<Document> = Vec::with_capacity(n);
    for i in 0..n {
        let source = sources[i % sources.len()];
        let roll: f64 = r.gen();
        let sentences = r.gen_range(2..6);
        let mut text: String = if roll < 0.55 {
            (0..sentences).map(|_| finance_sentence(&mut r)).collect::<Vec<_>>().join(" ")
        } else if roll < 0.65 {
            "The weather was lovely and the children played in the garden while we cooked dinner and talked \
             about the holiday plans for the summer by the sea with our friends."
                .repeat(sentences)
        } else if roll < 0.72 {
            "Die Bank hat im letzten Quartal einen deutlich höheren Gewinn erzielt, und die Aktionäre freuen \
             sich über die steigende Dividende des Unternehmens. "
                .repeat(sentences)
        } else if roll < 0.78 && !docs.is_empty() {
            docs[r.gen_range(0..docs.len())].text.clone()
        } else if roll < 0.84 && !docs.is_empty() {
            let base = docs[r.gen_range(0..docs.len())].text.clone();
            format!("{base} Shares closed higher.")
        } else if roll < 0.9 {
            let body = (0..sentences).map(|_| finance_sentence(&mut r)).collect::<Vec<_>>().join(" ");
            format!("<html><body><p>{body}</p><script>var x = 1;</script></body></html>")
        } else if roll < 0.95 {
            "Revenue rose.".to_string()
        } else {
            let body = (0..sentences).map(|_| finance_sentence(&mut r)).collect::<Vec<_>>().join(" ");
            format!("{body}\nContact investor relations at ir{i}@example.com or 555-123-4567.\n{body}")
        };
        if r.gen_bool(0.05) {
            text.push_str("\n\n   ");
        }
        let mut d = Document::new(format!("p{i:05}"), text, source);
        if r.gen_bool(0.3) {
            let host = if r.gen_bool(0.2) { "spam.example" } else { "news.example" };
            d = d.with_url(format!("https://{host}/article/{i}"));
        }
        docs.push(d);
    }
    docs
}

// ---------------------------------------------------------------- tool calls

pub const FUNCTIONS: [Function; 4] = [Function::Add, Function::Subtract, Function::Multiply, Function::Divide];

/// A random decimal literal with up to four fractional digits.
pub fn random_number(r: &mut ChaCha8Rng) -> BigDecimal {
    let scale = r.gen_range(0..=4i64);
    let mantissa: i64 = r.gen_range(-99_999..=99_999);
    BigDecimal::new(BigInt::from(mantissa), scale)
}

pub fn random_ast(r: &mut ChaCha8Rng, max_depth: usize) -> ToolExpr {
    if max_depth == 0 || r.gen_bool(0.3) {
        return ToolExpr::Number(random_number(r));
    }
    let f = *FUNCTIONS.choose(r).unwrap();
    ToolExpr::call(f, random_ast(r, max_depth - 1), random_ast(r, max_depth - 1))
}

pub fn to_rational(n: &BigDecimal) -> BigRational {
    let (digits, scale) = n.as_bigint_and_exponent();
    if scale >= 0 {
        BigRational::new(digits, BigInt::from(10).pow(scale as u32))
    } else {
        BigRational::from_integer(digits * BigInt::from(10).pow((-scale) as u32))
    }
}

/// Exact rational evaluation; `None` on division by zero.
pub fn rational_eval(e: &ToolExpr) -> Option<BigRational> {
    match e {
        ToolExpr::Number(n) => Some(to_rational(n)),
        ToolExpr::Call(f, a, b) => {
            let (a, b) = (rational_eval(a)?, rational_eval(b)?);
            match f {
                Function::Add => Some(a + b),
                Function::Subtract => Some(a - b),
                Function::Multiply => Some(a * b),
                Function::Divide => {
                    if b.is_zero() {
                        None
                    } else {
                        Some(a / b)
                    }
                }
            }
        }
    }
}

/// `|got − want| ≤ tol · |want|` evaluated exactly; an exact zero must match
/// exactly.
pub fn rel_close(got: &BigDecimal, want: &BigRational, tol: f64) -> bool {
    let diff = (to_rational(got) - want).abs();
    if want.is_zero() {
        return diff.is_zero();
    }
    let tol = BigRational::from_float(tol).unwrap();
    diff <= tol * want.abs()
}

// ---------------------------------------------------------------- statistics

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Upper-tail p-value of Pearson's chi-square goodness of fit to a uniform
/// distribution over `counts.len()` cells.
pub fn chi_square_uniform_p(counts: &[u64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((counts.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}
