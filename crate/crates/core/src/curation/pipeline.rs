use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::domain::domain_verdict;
use super::lang::lang_verdict;
use super::{
    clean_text, detect_language, extract_text, filter_sensitive_lines, filter_url, CurationError,
    Curator, Verdict,
};
use crate::corpus::{
    read_shard, write_shard, CorpusError, Document, Manifest, SourceLedger, Stage, StageReport,
};
use crate::dedup::{exact_dedup, fuzzy_dedup, DedupConfig};

#[derive(Debug)]
pub struct Pipeline {
    pub curator: Curator,
    pub dedup: DedupConfig,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub docs: Vec<Document>,
    pub reports: Vec<StageReport>,
}

enum Step {
    Keep(Document),
    Drop(&'static str),
}

impl Pipeline {
    pub fn new(curator: Curator, dedup: DedupConfig) -> Result<Self, CurationError> {
        dedup.validate()?;
        Ok(Pipeline { curator, dedup })
    }

    /// Stages must appear in pipeline order; any may be skipped.
    pub fn check_stages(&self, stages: &[Stage]) -> Result<(), CurationError> {
        for w in stages.windows(2) {
            if w[1] <= w[0] {
                return Err(CurationError::StageOrder(format!("{} before {}", w[0], w[1])));
            }
        }
        if stages.contains(&Stage::Domain) {
            self.curator.check_for_domain_stage()?;
        }
        Ok(())
    }

    pub fn run(&self, docs: Vec<Document>, stages: &[Stage]) -> Result<PipelineOutput, CurationError> {
        self.check_stages(stages)?;
        let mut docs = docs;
        let mut reports = Vec::with_capacity(stages.len());
        for &stage in stages {
            let (next, report) = self.run_stage(stage, docs)?;
            debug_assert!(report.check().is_ok(), "{:?}", report.check());
            reports.push(report);
            docs = next;
        }
        Ok(PipelineOutput { docs, reports })
    }

    fn run_stage(&self, stage: Stage, docs: Vec<Document>) -> Result<(Vec<Document>, StageReport), CurationError> {
        match stage {
            Stage::FuzzyDedup => return Ok(fuzzy_dedup(docs, &self.dedup)?),
            Stage::ExactDedup => return Ok(exact_dedup(docs)),
            _ => {}
        }
        let mut report = StageReport::begin(stage, &docs);
        let c = &self.curator;
        let results: Vec<(Step, usize)> = docs
            .into_par_iter()
            .map(|d| match stage {
                Stage::Url => (verdict_step(filter_url(&d, c), d), 0),
                Stage::Extract => {
                    let text = extract_text(&d.text);
                    if text.is_empty() {
                        (Step::Drop("empty_after_extract"), 0)
                    } else {
                        let mut d = d;
                        if text != d.text {
                            d.set_text(text);
                        }
                        (Step::Keep(d), 0)
                    }
                }
                Stage::Lang => {
                    let (code, conf) =
                        detect_language(&d.text, &c.profiles).expect("profiles checked at compile");
                    let v = lang_verdict(&code, conf, &c.config.lang_target, c.config.lang_confidence_min);
                    let mut d = d;
                    if v.is_keep() {
                        d.lang = Some(code);
                    }
                    (verdict_step(v, d), 0)
                }
                Stage::Domain => (verdict_step(domain_verdict(&d, c), d), 0),
                Stage::Sensitive => {
                    let (d, removed) = filter_sensitive_lines(d, c);
                    (Step::Keep(d), removed)
                }
                Stage::Clean => {
                    let (v, d) = clean_text(d, c);
                    (verdict_step(v, d), 0)
                }
                Stage::FuzzyDedup | Stage::ExactDedup => unreachable!(),
            })
            .collect();
        let mut survivors = Vec::with_capacity(results.len());
        for (step, lines) in results {
            report.lines_removed += lines as u64;
            match step {
                Step::Keep(d) => survivors.push(d),
                Step::Drop(reason) => report.drop_doc(reason),
            }
        }
        let report = report.finish(&survivors);
        Ok((survivors, report))
    }
}

fn verdict_step(v: Verdict, d: Document) -> Step {
    match v {
        Verdict::Keep => Step::Keep(d),
        Verdict::Drop(r) => Step::Drop(r),
    }
}

/// Reads the input shards in order, runs the pipeline, and writes
/// `curated.jsonl` and `manifest.json` into `out_dir`.
pub fn curate_files(
    pipeline: &Pipeline,
    inputs: &[PathBuf],
    out_dir: &Path,
    stages: &[Stage],
    strict: bool,
    config_digest: &str,
    created_at: String,
) -> Result<Manifest, CurationError> {
    pipeline.check_stages(stages)?;
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for path in inputs {
        let read = read_shard(path, strict)?;
        for s in &read.skipped {
            eprintln!("{}:{}: skipped: {}", path.display(), s.line, s.reason);
        }
        for d in read.records {
            if !seen.insert(d.id.clone()) {
                return Err(CorpusError::DuplicateId(d.id).into());
            }
            docs.push(d);
        }
    }
    let input_snapshot: Vec<Document> = docs.clone();
    let out = pipeline.run(docs, stages)?;
    fs::create_dir_all(out_dir).map_err(|e| CorpusError::io(out_dir, e))?;
    write_shard(&out.docs, &out_dir.join("curated.jsonl"))?;
    let mut manifest = Manifest::new(config_digest, out.reports, created_at);
    manifest.sources = SourceLedger::tally(&input_snapshot, &out.docs);
    let json = serde_json::to_string_pretty(&manifest).map_err(CorpusError::from)?;
    let mpath = out_dir.join("manifest.json");
    fs::write(&mpath, json + "\n").map_err(|e| CorpusError::io(&mpath, e))?;
    Ok(manifest)
}
