use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn finset(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finset"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn finset")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SENTENCE: &str = "The company reported quarterly revenue growth and strong earnings per share, \
    beating analyst estimates for the fiscal year while the bank raised its dividend and cut costs \
    across the investment portfolio.";

fn write_shard(dir: &Path) {
    let mut lines = Vec::new();
    for (i, source) in ["news", "sec", "press", "c4", "social"].iter().enumerate() {
        let text = format!("{SENTENCE} Item {i} concerns bond yields, interest rates and market liquidity.");
        lines.push(serde_json::json!({ "id": format!("d{i}"), "text": text, "source": source }).to_string());
    }
    // an exact copy of d0 under a new id
    let dup = serde_json::json!({
        "id": "d0b",
        "text": format!("{SENTENCE} Item 0 concerns bond yields, interest rates and market liquidity."),
        "source": "news"
    });
    lines.push(dup.to_string());
    fs::write(dir.join("shard.jsonl"), lines.join("\n") + "\n").unwrap();
}

#[test]
fn curate_writes_manifest_and_output() {
    let tmp = TempDir::new().unwrap();
    write_shard(tmp.path());
    let o = finset(tmp.path(), &["curate", "shard.jsonl", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(tmp.path().join("out/curated.jsonl").exists());
    let m: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["stages"].as_array().unwrap().len(), 8);
    assert!(stdout(&o).lines().any(|l| l.starts_with("Total")));
}

#[test]
fn curate_subset_and_bad_stage() {
    let tmp = TempDir::new().unwrap();
    write_shard(tmp.path());
    let o = finset(tmp.path(), &["curate", "--stages", "url,exact_dedup", "shard.jsonl", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = finset(tmp.path(), &["curate", "--stages", "url,nonsense", "shard.jsonl", "out"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deterministic_reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    write_shard(tmp.path());
    for out in ["a", "b"] {
        let o = finset(tmp.path(), &["--deterministic", "--seed", "7", "curate", "shard.jsonl", out]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in ["curated.jsonl", "manifest.json"] {
        assert_eq!(fs::read(tmp.path().join("a").join(f)).unwrap(), fs::read(tmp.path().join("b").join(f)).unwrap(), "{f}");
    }
}

#[test]
fn dedup_removes_copy_and_reports_sources() {
    let tmp = TempDir::new().unwrap();
    write_shard(tmp.path());
    let o = finset(tmp.path(), &["--json", "dedup", "--cache", "sig.bin", "shard.jsonl", "out"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let last = m["stages"].as_array().unwrap().last().unwrap();
    assert!(last["docs_out"].as_u64().unwrap() <= 5);
    assert_eq!(m["sources"].as_array().unwrap().len(), 5);
    assert!(tmp.path().join("sig.bin").exists());
    // the cache is reused on the second run
    let o = finset(tmp.path(), &["dedup", "--cache", "sig.bin", "shard.jsonl", "out2"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn toolcall_eval_prints_value() {
    let tmp = TempDir::new().unwrap();
    let o = finset(tmp.path(), &["toolcall", "eval", "Add(2, 3)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "5");
    let o = finset(tmp.path(), &["toolcall", "eval", "Divide(1, 0)"]);
    assert_eq!(o.status.code(), Some(1));
    let o = finset(tmp.path(), &["toolcall", "eval", "Add(2,"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn toolcall_extract() {
    let tmp = TempDir::new().unwrap();
    let o = finset(tmp.path(), &["toolcall", "extract", "so the answer is Multiply(Add(1, 2), 4) overall"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("Multiply"));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let tmp = TempDir::new().unwrap();
    let o = finset(tmp.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = finset(tmp.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn score_length_mismatch_names_the_fault() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("p.jsonl"), "{\"id\":\"1\",\"value\":\"a\"}\n{\"id\":\"2\",\"value\":\"b\"}\n").unwrap();
    fs::write(tmp.path().join("g.jsonl"), "{\"id\":\"1\",\"value\":\"a\"}\n").unwrap();
    let o = finset(tmp.path(), &["score", "--task", "sa", "p.jsonl", "g.jsonl"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains('2') && err.contains('1'), "{err}");
    assert!(err.to_lowercase().contains("length") || err.to_lowercase().contains("mismatch"), "{err}");
}

#[test]
fn score_unknown_task_is_usage_error() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("p.jsonl"), "{\"id\":\"1\",\"value\":\"a\"}\n").unwrap();
    let o = finset(tmp.path(), &["score", "--task", "poetry", "p.jsonl", "p.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_metric_report_round_trips() {
    let tmp = TempDir::new().unwrap();
    let p: String = (0..10).map(|i| format!("{{\"id\":\"{i}\",\"value\":{}}}\n", if i < 8 { 0 } else { 1 })).collect();
    let g: String = (0..10).map(|i| format!("{{\"id\":\"{i}\",\"value\":0}}\n")).collect();
    fs::write(tmp.path().join("p.jsonl"), p).unwrap();
    fs::write(tmp.path().join("g.jsonl"), g).unwrap();
    let o = finset(tmp.path(), &["--json", "score", "--task", "hi", "p.jsonl", "g.jsonl"]);
    assert!(o.status.success(), "{}", stderr(&o));
    fs::write(tmp.path().join("r.json"), o.stdout.clone()).unwrap();
    let o2 = finset(tmp.path(), &["--json", "report", "r.json"]);
    assert!(o2.status.success(), "{}", stderr(&o2));
    let a: Value = serde_json::from_slice(&o.stdout).unwrap();
    let b: Value = serde_json::from_slice(&o2.stdout).unwrap();
    assert_eq!(a, b);
    let o3 = finset(tmp.path(), &["report", "r.json"]);
    assert_eq!(stdout(&o3), "HI  0.8000  n=10\n");
}

#[test]
fn index_digest_mismatch_is_rejected() {
    let tmp = TempDir::new().unwrap();
    write_shard(tmp.path());
    fs::write(tmp.path().join("shard.jsonl"), fs::read_to_string(tmp.path().join("shard.jsonl")).unwrap().replace("\"d0b\"", "\"d5\"")).unwrap();
    let o = finset(tmp.path(), &["index", "shard.jsonl", "idx.bin"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = finset(tmp.path(), &["search", "idx.bin", "bond yields"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!stdout(&o).is_empty());
    fs::write(tmp.path().join("c.toml"), "[retrieval]\nk1 = 1.5\n").unwrap();
    let o = finset(tmp.path(), &["--config", "c.toml", "search", "idx.bin", "bond yields"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("config"), "{}", stderr(&o));
}

#[test]
fn score_manifest_digest_is_checked() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("p.jsonl"), "{\"id\":\"1\",\"value\":\"a\"}\n").unwrap();
    fs::write(tmp.path().join("m.json"), "{\"config_digest\":\"deadbeef\"}").unwrap();
    let o = finset(tmp.path(), &["score", "--task", "sa", "--manifest", "m.json", "p.jsonl", "p.jsonl"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("deadbeef"));
}

#[test]
fn bad_config_is_usage_error() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("c.toml"), "[retrieval]\nunknown_key = 1\n").unwrap();
    let o = finset(tmp.path(), &["--config", "c.toml", "toolcall", "eval", "Add(1, 1)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_count_env() {
    let tmp = TempDir::new().unwrap();
    write_shard(tmp.path());
    let run = |threads: &str, out: &str| {
        Command::new(env!("CARGO_BIN_EXE_finset"))
            .current_dir(tmp.path())
            .env("FINSET_THREADS", threads)
            .args(["--deterministic", "curate", "shard.jsonl", out])
            .output()
            .unwrap()
    };
    assert!(run("1", "one").status.success());
    assert!(run("4", "four").status.success());
    assert_eq!(
        fs::read(tmp.path().join("one/curated.jsonl")).unwrap(),
        fs::read(tmp.path().join("four/curated.jsonl")).unwrap()
    );
    assert_eq!(run("zero", "bad").status.code(), Some(2));
}

#[test]
fn builders_end_to_end() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let prefs: String = (0..20)
        .map(|i| {
            serde_json::json!({ "prompt": format!("q{i}"), "chosen": "good", "candidates": ["bad one", "bad two"] })
                .to_string()
                + "\n"
        })
        .collect();
    fs::write(d.join("prefs.jsonl"), prefs).unwrap();
    let o = finset(d, &["--seed", "3", "prefs", "prefs.jsonl", "pairs.jsonl"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(d.join("pairs.jsonl")).unwrap().lines().count(), 20);
    assert!(d.join("pairs.jsonl.manifest.json").exists());

    let gloss: String = ["stock", "bond", "option", "future", "swap"]
        .iter()
        .map(|t| serde_json::json!({ "term": t, "definition": format!("A {t} is a financial contract.") }).to_string() + "\n")
        .collect();
    fs::write(d.join("gloss.jsonl"), gloss).unwrap();
    let o = finset(d, &["mcq", "gloss.jsonl", "mcq.jsonl", "--tsv", "mcq.tsv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(d.join("mcq.tsv")).unwrap().lines().count(), 5);
    let o = finset(d, &["mcq", "gloss.jsonl", "mcq.jsonl", "-k", "9"]);
    assert_eq!(o.status.code(), Some(1));

    let instr = [
        r#"{"id":"1","instruction":"Explain the stock dividend yield","output":"Dividend over price.","source":"fiqa"}"#,
        r#"{"id":"2","instruction":"Explain the stock dividend yield","output":"Dividend over price.","source":"alpaca"}"#,
    ]
    .join("\n");
    fs::write(d.join("instr.jsonl"), instr).unwrap();
    let o = finset(d, &["instructions", "instr.jsonl", "kept.jsonl", "--threshold", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(d.join("kept.jsonl")).unwrap().lines().count(), 1);
    assert!(stdout(&o).contains("Total after deduplication"));
}

#[test]
fn prompt_modes() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let o = finset(d, &["prompt", "--question", "What is EPS?"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("Answer:"));
    fs::write(d.join("doc.txt"), "Revenue was 10.").unwrap();
    let o = finset(d, &["prompt", "--question", "Revenue?", "--document", "doc.txt"]);
    assert!(stdout(&o).trim_end().ends_with("Extracted Text:"));
    fs::write(d.join("ext.txt"), "Revenue: 10").unwrap();
    let o = finset(d, &["prompt", "--question", "Revenue?", "--document", "doc.txt", "--extracted", "ext.txt"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("Revenue: 10"));
}

#[test]
fn agreement_command() {
    let tmp = TempDir::new().unwrap();
    let mut lines = String::new();
    for (i, (a, b)) in [("A", "A"), ("B", "B"), ("A", "B"), ("C", "C")].iter().enumerate() {
        lines.push_str(&format!("{{\"id\":\"{i}\",\"annotator\":\"x\",\"label\":\"{a}\"}}\n"));
        lines.push_str(&format!("{{\"id\":\"{i}\",\"annotator\":\"y\",\"label\":\"{b}\"}}\n"));
    }
    fs::write(tmp.path().join("ann.jsonl"), lines).unwrap();
    let o = finset(tmp.path(), &["agreement", "ann.jsonl"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("kappa"));
}
