use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use finset_core::builders::{
    build_mcq, build_preference_pairs, dedup_instructions, write_mcq_tsv, InstructionRecord, InstructionSummary,
    PreferenceItem, TermDefinition,
};
use finset_core::corpus::{
    read_jsonl, read_jsonl_with, read_shard, write_jsonl, write_shard, CorpusError, Document, Manifest, SourceLedger,
    Stage,
};
use finset_core::curation::{curate_files, Curator, Pipeline};
use finset_core::dedup::{exact_dedup, fuzzy_dedup_cached, SignatureCache};
use finset_core::metrics::{
    agreed_ids, category_tallies, evaluate_task, kappa_from_annotations, Annotation, MetricReport, Task,
};
use finset_core::report::{render_agreement, render_instruction_summary, render_manifest, render_metrics};
use finset_core::retrieval::{
    bm25_search, build_prompt, build_retrieval_chain, index_documents, load_index, save_index, stage1_prompt, Index,
    PromptSpec, RetrievalConfig, Stage2Builder,
};
use finset_core::toolcall::{eval_program, extract_program_with, format_decimal, parse_program_with, render_program};
use serde_json::json;

use crate::run::{check_manifest_digest, manifest_path_for, out, usage, Ctx, Failure, Result, RunManifest};
use crate::{PromptArgs, ToolcallAction};

/// Splits `inputs... output` and rejects an empty input list.
fn split_last(mut paths: Vec<PathBuf>) -> Result<(Vec<PathBuf>, PathBuf)> {
    let out = paths.pop().ok_or_else(|| usage("missing output path"))?;
    if paths.is_empty() {
        return Err(usage("at least one input is required"));
    }
    Ok((paths, out))
}

fn parse_stages(names: Option<Vec<String>>) -> Result<Vec<Stage>> {
    match names {
        None => Ok(Stage::ALL.to_vec()),
        Some(names) => names
            .iter()
            .filter(|n| !n.trim().is_empty())
            .map(|n| n.trim().parse::<Stage>().map_err(usage))
            .collect(),
    }
}

/// Reads shards in order, reporting skipped lines and rejecting ids that
/// repeat across shards.
fn read_docs(ctx: &Ctx, inputs: &[PathBuf]) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for path in inputs {
        let read = read_shard(path, ctx.strict())?;
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
    Ok(docs)
}

fn warn_skipped(path: &Path, skipped: &[finset_core::corpus::SkippedLine]) {
    for s in skipped {
        eprintln!("{}:{}: skipped: {}", path.display(), s.line, s.reason);
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(())
}

pub fn curate(ctx: &Ctx, stages: Option<Vec<String>>, paths: Vec<PathBuf>) -> Result<()> {
    let (inputs, out_dir) = split_last(paths)?;
    let stages = parse_stages(stages)?;
    let curator = Curator::new(ctx.config.curation.clone()).map_err(|e| Failure::Usage(e.into()))?;
    let pipeline = Pipeline::new(curator, ctx.config.dedup.clone()).map_err(|e| Failure::Usage(e.into()))?;
    pipeline.check_stages(&stages).map_err(|e| Failure::Usage(e.into()))?;
    let manifest = curate_files(
        &pipeline,
        &inputs,
        &out_dir,
        &stages,
        ctx.strict(),
        &ctx.digest,
        ctx.created_at.clone(),
    )?;
    ctx.emit(&manifest, || render_manifest(&manifest))
}

pub fn dedup(ctx: &Ctx, cache_path: Option<PathBuf>, paths: Vec<PathBuf>) -> Result<()> {
    let (inputs, out_dir) = split_last(paths)?;
    let docs = read_docs(ctx, &inputs)?;
    let input = docs.clone();
    let mut cache = match &cache_path {
        Some(p) if p.exists() => SignatureCache::load(p, &ctx.digest)?,
        _ => SignatureCache::new(ctx.digest.clone()),
    };
    let (docs, fuzzy) = fuzzy_dedup_cached(docs, &ctx.config.dedup, &mut cache)?;
    let (docs, exact) = exact_dedup(docs);
    create_dir(&out_dir)?;
    write_shard(&docs, &out_dir.join("deduped.jsonl"))?;
    if let Some(p) = &cache_path {
        cache.save(p)?;
    }
    let mut manifest = Manifest::new(ctx.digest.clone(), vec![fuzzy, exact], ctx.created_at.clone());
    manifest.sources = SourceLedger::tally(&input, &docs);
    ctx.write_json(&out_dir.join("manifest.json"), &manifest)?;
    ctx.emit(&manifest, || render_manifest(&manifest))
}

pub fn instructions(ctx: &Ctx, input: &Path, output: &Path, threshold: Option<f64>) -> Result<()> {
    let read = read_jsonl_with(input, ctx.strict(), |r: InstructionRecord| r.validate().map(|_| r))?;
    warn_skipped(input, &read.skipped);
    let records = read.records;
    let threshold = threshold.unwrap_or(ctx.config.curation.domain_threshold);
    if !(0.0..=1.0).contains(&threshold) {
        return Err(usage(format!("threshold must lie in [0, 1], got {threshold}")));
    }
    let (survivors, report) = dedup_instructions(records.clone(), &ctx.config.curation.domain_lexicon, threshold);
    write_jsonl(&survivors, output)?;
    let summary = InstructionSummary::new(&records, &survivors);
    let mut m = ctx.run_manifest("instructions", &[input.to_path_buf()], &[output.to_path_buf()]);
    m.stages = vec![report];
    m.details = serde_json::to_value(&summary)?;
    ctx.write_json(&manifest_path_for(output), &m)?;
    ctx.emit(&summary, || render_instruction_summary(&summary))
}

pub fn prefs(ctx: &Ctx, input: &Path, output: &Path) -> Result<()> {
    let read = read_jsonl::<PreferenceItem>(input, ctx.strict())?;
    warn_skipped(input, &read.skipped);
    let outcome = build_preference_pairs(&read.records, ctx.config.seed);
    for e in &outcome.errors {
        eprintln!("{}: item {}: {}", input.display(), e.index + 1, e.message);
    }
    write_jsonl(&outcome.pairs, output)?;
    let details = json!({
        "items": read.records.len(),
        "pairs": outcome.pairs.len(),
        "skipped": outcome.skipped,
        "errors": outcome.errors,
    });
    let mut m = ctx.run_manifest("prefs", &[input.to_path_buf()], &[output.to_path_buf()]);
    m.details = details.clone();
    ctx.write_json(&manifest_path_for(output), &m)?;
    ctx.emit(&details, || {
        let mut s = format!("pairs    {}\n", outcome.pairs.len());
        for (reason, n) in &outcome.skipped {
            s.push_str(&format!("skipped  {n}  ({reason})\n"));
        }
        s.push_str(&format!("errors   {}\n", outcome.errors.len()));
        s
    })
}

pub fn mcq(ctx: &Ctx, input: &Path, output: &Path, tsv: Option<&Path>, k: usize) -> Result<()> {
    if k == 0 {
        return Err(usage("k must be at least 1"));
    }
    let read = read_jsonl::<TermDefinition>(input, ctx.strict())?;
    warn_skipped(input, &read.skipped);
    let items = build_mcq(&read.records, k, ctx.config.seed)?;
    write_jsonl(&items, output)?;
    let mut outputs = vec![output.to_path_buf()];
    if let Some(path) = tsv {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut w = BufWriter::new(f);
        write_mcq_tsv(&items, &mut w)?;
        w.flush()?;
        outputs.push(path.to_path_buf());
    }
    let details = json!({ "terms": read.records.len(), "items": items.len(), "k": k });
    let mut m = ctx.run_manifest("mcq", &[input.to_path_buf()], &outputs);
    m.details = details.clone();
    ctx.write_json(&manifest_path_for(output), &m)?;
    ctx.emit(&details, || format!("items  {}\n", items.len()))
}

pub fn index(ctx: &Ctx, paths: Vec<PathBuf>) -> Result<()> {
    let (inputs, out) = split_last(paths)?;
    let docs = read_docs(ctx, &inputs)?;
    let idx = index_documents(&docs)?;
    let f = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = BufWriter::new(f);
    save_index(&idx, &ctx.digest, &mut w)?;
    w.flush()?;
    let details = json!({ "documents": idx.len(), "terms": idx.vocabulary_size(), "avgdl": idx.avgdl() });
    let mut m = ctx.run_manifest("index", &inputs, std::slice::from_ref(&out));
    m.details = details.clone();
    ctx.write_json(&manifest_path_for(&out), &m)?;
    ctx.emit(&details, || format!("documents  {}\nterms      {}\n", idx.len(), idx.vocabulary_size()))
}

fn open_index(ctx: &Ctx, path: &Path) -> Result<Index> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let (idx, _) = load_index(&mut BufReader::new(f), Some(&ctx.digest))
        .with_context(|| format!("loading {}", path.display()))?;
    Ok(idx)
}

fn retrieval_config(ctx: &Ctx, top_k: Option<usize>) -> Result<RetrievalConfig> {
    let mut cfg = ctx.config.retrieval.clone();
    if let Some(k) = top_k {
        cfg.top_k = k;
    }
    cfg.validate().map_err(|e| Failure::Usage(e.into()))?;
    Ok(cfg)
}

pub fn search(ctx: &Ctx, index: &Path, query: &str, top_k: Option<usize>) -> Result<()> {
    let cfg = retrieval_config(ctx, top_k)?;
    let idx = open_index(ctx, index)?;
    let hits = bm25_search(&idx, query, &cfg);
    ctx.emit(&hits, || {
        hits.iter()
            .enumerate()
            .map(|(i, h)| format!("{}  {}  {:.6}\n", i + 1, h.id, h.score))
            .collect()
    })
}

fn read_text(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

pub fn prompt(ctx: &Ctx, args: PromptArgs) -> Result<()> {
    if args.question.trim().is_empty() {
        return Err(usage("--question must not be empty"));
    }
    let text = if let Some(doc_path) = &args.document {
        let document = read_text(doc_path)?;
        match &args.extracted {
            None => stage1_prompt(document.trim_end(), &args.question),
            Some(extracted) => {
                let extracted = read_text(extracted)?;
                let mut stage2 = match &args.index {
                    Some(p) => {
                        let idx = open_index(ctx, p)?;
                        let cfg = retrieval_config(ctx, args.top_k)?;
                        build_retrieval_chain(&document, &args.question, &idx, &cfg).1
                    }
                    None => Stage2Builder::new(args.question.clone(), Vec::new()),
                };
                if let Some(p) = &args.persona {
                    stage2.persona = p.clone();
                }
                if args.no_instructions {
                    stage2.instructions.clear();
                } else if !args.instructions.is_empty() {
                    stage2.instructions = args.instructions.clone();
                }
                if let Some(c) = &args.context {
                    stage2.context = Some(read_text(c)?.trim_end().to_string());
                }
                stage2.build(extracted.trim_end())
            }
        }
    } else {
        let mut spec = PromptSpec::new(args.question.clone());
        if let Some(p) = args.persona {
            spec.persona = p;
        }
        if args.no_instructions {
            spec.instructions.clear();
        } else if !args.instructions.is_empty() {
            spec.instructions = args.instructions;
        }
        if let Some(c) = &args.context {
            spec.context = Some(read_text(c)?.trim_end().to_string());
        }
        if let Some(r) = &args.retrieval {
            spec.retrieval = Some(read_text(r)?.trim_end().to_string());
        }
        build_prompt(&spec)
    };
    if ctx.opts.json {
        out(&format!("{}\n", json!({ "prompt": text })))
    } else {
        out(&format!("{text}\n"))
    }
}

pub fn toolcall(ctx: &Ctx, action: ToolcallAction) -> Result<()> {
    let opts = ctx.config.toolcall.parse_options();
    match action {
        ToolcallAction::Eval { program } => {
            let expr = parse_program_with(&program, opts)?;
            let value = format_decimal(&eval_program(&expr)?);
            if ctx.opts.json {
                out(&format!("{}\n", json!({ "program": render_program(&expr), "value": value })))?;
            } else {
                out(&format!("{value}\n"))?;
            }
        }
        ToolcallAction::Extract { text } => {
            let expr = extract_program_with(&text, opts).ok_or_else(|| anyhow!("no program found"))?;
            out(&format!("{}\n", render_program(&expr)))?;
        }
    }
    Ok(())
}

pub fn score(
    ctx: &Ctx,
    task: &str,
    predictions: &Path,
    gold: &Path,
    agreement: Option<&Path>,
    manifest: Option<&Path>,
) -> Result<()> {
    let task: Task = task.parse().map_err(|e: finset_core::metrics::MetricError| usage(e))?;
    if let Some(m) = manifest {
        check_manifest_digest(m, &ctx.digest)?;
    }
    let reports = evaluate_task(task, predictions, gold, agreement)?;
    ctx.emit(&reports, || render_metrics(&reports))
}

pub fn agreement(ctx: &Ctx, path: &Path) -> Result<()> {
    let read = read_jsonl::<Annotation>(path, ctx.strict())?;
    warn_skipped(path, &read.skipped);
    let report = kappa_from_annotations(&read.records)?;
    let agreed = agreed_ids(&read.records)?;
    let mut seen = HashSet::new();
    let labels: Vec<String> = read
        .records
        .iter()
        .filter(|a| agreed.contains(&a.id) && seen.insert(a.id.clone()))
        .map(|a| a.label.clone())
        .collect();
    let value = json!({ "agreement": report, "agreed_tallies": category_tallies(&labels) });
    ctx.emit(&value, || render_agreement(&report, Some(&labels)))
}

pub fn report(ctx: &Ctx, path: &Path) -> Result<()> {
    let text = read_text(path)?;
    let v: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    if v.get("command").is_some() {
        let m: RunManifest = serde_json::from_value(v)?;
        return ctx.emit(&m, || {
            let mut s = format!("{}  config {}\n", m.command, m.config_digest);
            if !m.stages.is_empty() {
                let core = Manifest::new(m.config_digest.clone(), m.stages.clone(), m.created_at.clone());
                s.push_str(&render_manifest(&core));
            }
            s
        });
    }
    if v.get("stages").is_some() {
        let m: Manifest = serde_json::from_value(v)?;
        m.validate().map_err(|e| anyhow!("{}: {e}", path.display()))?;
        return ctx.emit(&m, || render_manifest(&m));
    }
    let reports: Vec<MetricReport> = if v.is_array() {
        serde_json::from_value(v)?
    } else {
        vec![serde_json::from_value(v)?]
    };
    for r in &reports {
        r.validate().map_err(|e| anyhow!("{}: {e}", path.display()))?;
    }
    ctx.emit(&reports, || render_metrics(&reports))
}
