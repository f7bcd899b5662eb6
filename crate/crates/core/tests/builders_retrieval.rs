mod common;

use std::collections::BTreeSet;

use chrono::NaiveDate;
use finset_core::builders::{
    build_mcq, build_preference_pairs, read_mcq_tsv, write_mcq_tsv, Candidate, PreferenceItem, TermDefinition,
};
use finset_core::corpus::{Document, Source};
use finset_core::retrieval::{bm25_search, index_documents, load_index, save_index, RetrievalConfig};
use proptest::prelude::*;

use common::{chi_square_uniform_p, random_text, rng};

fn glossary(n: usize, seed: u64) -> Vec<TermDefinition> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| TermDefinition { term: format!("t{i}"), definition: random_text(&mut r, 8, 60).join(" ") })
        .collect()
}

#[test]
fn mcq_positions_are_uniform_across_seeds() {
    let g = glossary(60, 1);
    let mut counts = [0u64; 4];
    for seed in 0..20 {
        for item in build_mcq(&g, 3, seed).unwrap() {
            counts[item.correct_index] += 1;
        }
    }
    assert!(chi_square_uniform_p(&counts) > 0.01, "{counts:?}");
}

#[test]
fn mcq_is_deterministic_per_seed() {
    let g = glossary(30, 2);
    let a = build_mcq(&g, 3, 9).unwrap();
    let b = build_mcq(&g, 3, 9).unwrap();
    let c = build_mcq(&g, 3, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn mcq_tsv_round_trip() {
    let mut g = glossary(10, 3);
    g[0].definition = "tab\there and\nnewline \\ slash".into();
    let items = build_mcq(&g, 3, 0).unwrap();
    let mut buf = Vec::new();
    write_mcq_tsv(&items, &mut buf).unwrap();
    let back = read_mcq_tsv(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(back.len(), items.len());
    for (x, y) in items.iter().zip(&back) {
        assert_eq!(x.options, y.options);
        assert_eq!(x.correct_index, y.correct_index);
        assert_eq!(x.question, y.question);
    }
}

#[test]
fn mcq_too_small_glossary_errors() {
    assert!(build_mcq(&glossary(3, 4), 3, 0).is_err());
}

fn items(n: usize) -> Vec<PreferenceItem> {
    (0..n)
        .map(|i| PreferenceItem {
            prompt: format!("p{i}"),
            chosen: format!("c{i}"),
            chosen_source: "gold".into(),
            candidates: vec![
                Candidate::Sourced { text: format!("x{i}"), source: "model-x".into() },
                Candidate::Sourced { text: format!("y{i}"), source: "model-y".into() },
            ],
        })
        .collect()
}

#[test]
fn preference_choice_is_per_item() {
    let all = items(300);
    let full = build_preference_pairs(&all, 17);
    // the choice for item i depends only on (seed, i): a prefix gives a prefix
    let prefix = build_preference_pairs(&all[..100], 17);
    assert_eq!(prefix.pairs, full.pairs[..100]);
    for p in &full.pairs {
        assert_ne!(p.chosen, p.rejected);
        let expect = if p.rejected.starts_with('x') { "model-x" } else { "model-y" };
        assert_eq!(p.rejected_source, expect);
    }
}

#[test]
fn preference_frequency_over_seeds() {
    let all = items(500);
    let mut xs = 0;
    for seed in 0..8 {
        xs += build_preference_pairs(&all, seed).pairs.iter().filter(|p| p.rejected.starts_with('x')).count();
    }
    let f = xs as f64 / 4000.0;
    assert!((f - 0.5).abs() < 0.05, "{f}");
}

fn corpus(words: &[Vec<String>], dates: &[Option<NaiveDate>]) -> Vec<Document> {
    words
        .iter()
        .zip(dates)
        .enumerate()
        .map(|(i, (w, d))| {
            let doc = Document::new(format!("d{i}"), w.join(" "), Source::News);
            match d {
                Some(d) => doc.with_date(*d),
                None => doc,
            }
        })
        .collect()
}

fn arb_corpus() -> impl Strategy<Value = (Vec<Vec<String>>, Vec<Option<NaiveDate>>)> {
    (1usize..15).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec("[a-e]", 1..12), n),
            prop::collection::vec(prop::option::of((2020i32..2025, 1u32..13).prop_map(|(y, m)| NaiveDate::from_ymd_opt(y, m, 1).unwrap())), n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(100) })]

    #[test]
    fn search_respects_window_order_and_top_k((words, dates) in arb_corpus(), q in "[a-e]( [a-e]){0,3}", k in 1usize..6) {
        let docs = corpus(&words, &dates);
        let index = index_documents(&docs).unwrap();
        let cfg = RetrievalConfig { top_k: k, ..Default::default() };
        let hits = bm25_search(&index, &q, &cfg);
        prop_assert!(hits.len() <= k);
        let qterms: BTreeSet<&str> = q.split(' ').collect();
        for h in &hits {
            let d = docs.iter().find(|d| d.id == h.id).unwrap();
            prop_assert!(cfg.admits(d.date));
            prop_assert!(d.text.split(' ').any(|w| qterms.contains(w)));
            prop_assert!(h.score > 0.0);
        }
        for w in hits.windows(2) {
            prop_assert!(w[0].score > w[1].score || (w[0].score == w[1].score && w[0].id < w[1].id));
        }
    }

    #[test]
    fn saved_index_scores_identically((words, dates) in arb_corpus(), q in "[a-e]( [a-e]){0,3}") {
        let docs = corpus(&words, &dates);
        let index = index_documents(&docs).unwrap();
        let mut buf = Vec::new();
        save_index(&index, "cfg", &mut buf).unwrap();
        let (loaded, digest) = load_index(&mut buf.as_slice(), Some("cfg")).unwrap();
        prop_assert_eq!(digest, "cfg");
        let cfg = RetrievalConfig { top_k: 20, date_from: None, date_to: None, ..Default::default() };
        prop_assert_eq!(bm25_search(&index, &q, &cfg), bm25_search(&loaded, &q, &cfg));
        prop_assert!(load_index(&mut buf.as_slice(), Some("other")).is_err());
    }
}

#[test]
fn df_and_idf_hand_case() {
    let docs = vec![
        Document::new("D1", "stock market rally", Source::Other),
        Document::new("D2", "bond market", Source::Other),
        Document::new("D3", "weather today sunny", Source::Other),
    ];
    let index = index_documents(&docs).unwrap();
    assert_eq!(index.df("market"), 2);
    assert!((index.idf("market") - 1.6f64.ln()).abs() < 1e-12);
    assert!((index.avgdl() - 8.0 / 3.0).abs() < 1e-12);
    let dup = vec![docs[0].clone(), docs[0].clone()];
    assert!(index_documents(&dup).is_err());
}
