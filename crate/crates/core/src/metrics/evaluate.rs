use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    accuracy, agreed_ids, entity_f1, exact_match_numeric, hallucination_index, rouge, Annotation, EntitySpan, Metric,
    MetricError, MetricReport, Task, DEFAULT_REL_TOL,
};
use crate::corpus::{read_jsonl, CorpusError};

/// One line of a predictions or gold file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueRecord {
    pub id: String,
    pub value: Value,
}

fn corpus_err(e: CorpusError) -> MetricError {
    match e {
        CorpusError::Malformed { path, line, reason } => MetricError::Schema {
            file: path.display().to_string(),
            record: line,
            message: reason,
        },
        CorpusError::Io { path, source } => MetricError::Io { path: path.display().to_string(), source },
        other => MetricError::Schema { file: String::new(), record: 0, message: other.to_string() },
    }
}

pub fn read_values(path: &Path) -> Result<Vec<ValueRecord>, MetricError> {
    read_jsonl(path, true).map(|o| o.records).map_err(corpus_err)
}

fn read_annotations(path: &Path) -> Result<Vec<Annotation>, MetricError> {
    read_jsonl(path, true).map(|o| o.records).map_err(corpus_err)
}

fn as_label(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(format!("expected a label, found {other}")),
    }
}

fn as_spans(v: &Value) -> Result<Vec<EntitySpan>, String> {
    let spans: Vec<EntitySpan> =
        serde_json::from_value(v.clone()).map_err(|e| format!("expected a span list: {e}"))?;
    for s in &spans {
        s.validate()?;
    }
    Ok(spans)
}

/// An option index: a non-negative integer, its decimal string, or a letter
/// `A`, `B`, ... counted from 0.
fn as_option(v: &Value) -> Result<usize, String> {
    let bad = || format!("expected an option index, found {v}");
    match v {
        Value::Number(n) => n.as_u64().map(|n| n as usize).ok_or_else(bad),
        Value::String(s) => {
            let s = s.trim();
            if let Ok(n) = s.parse::<usize>() {
                return Ok(n);
            }
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c.is_ascii_alphabetic() => Ok((c.to_ascii_uppercase() as u8 - b'A') as usize),
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

fn extract<T>(
    records: &[&ValueRecord],
    file: &str,
    f: impl Fn(&Value) -> Result<T, String>,
) -> Result<Vec<T>, MetricError> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            f(&r.value).map_err(|message| MetricError::Schema { file: file.to_string(), record: i + 1, message })
        })
        .collect()
}

/// Scores aligned prediction and gold records with the task's metrics.
///
/// Records must pair up by position with equal ids. With `keep`, only ids in
/// the set are scored.
pub fn evaluate_values(
    task: Task,
    pred: &[ValueRecord],
    gold: &[ValueRecord],
    keep: Option<&BTreeSet<String>>,
) -> Result<Vec<MetricReport>, MetricError> {
    if pred.len() != gold.len() {
        return Err(MetricError::LengthMismatch { pred: pred.len(), gold: gold.len() });
    }
    for (i, (p, g)) in pred.iter().zip(gold).enumerate() {
        if p.id != g.id {
            return Err(MetricError::Schema {
                file: "predictions".into(),
                record: i + 1,
                message: format!("id {:?} does not match gold id {:?}", p.id, g.id),
            });
        }
    }
    let (p, g): (Vec<&ValueRecord>, Vec<&ValueRecord>) = pred
        .iter()
        .zip(gold)
        .filter(|(_, g)| keep.is_none_or(|k| k.contains(&g.id)))
        .unzip();
    if g.is_empty() {
        return Err(MetricError::Empty);
    }
    let n = g.len() as u64;
    let report = |metric: Metric, value: f64| MetricReport { task, metric, value, n };
    let reports = match task {
        Task::Cu | Task::Sa | Task::Smp | Task::Cs | Task::Fd => {
            let (pl, gl) = (extract(&p, "predictions", as_label)?, extract(&g, "gold", as_label)?);
            vec![report(Metric::Accuracy, accuracy(&pl, &gl)?)]
        }
        Task::Ner => {
            let (ps, gs) = (extract(&p, "predictions", as_spans)?, extract(&g, "gold", as_spans)?);
            vec![report(Metric::EntityF1, entity_f1(&ps, &gs)?.f1)]
        }
        Task::Nu => {
            let (pl, gl) = (extract(&p, "predictions", as_label)?, extract(&g, "gold", as_label)?);
            vec![report(Metric::ExactMatch, exact_match_numeric(&pl, &gl, DEFAULT_REL_TOL)?)]
        }
        Task::Ts => {
            let (pl, gl) = (extract(&p, "predictions", as_label)?, extract(&g, "gold", as_label)?);
            let s = rouge(&pl, &gl)?;
            vec![report(Metric::Rouge1, s.rouge1), report(Metric::Rouge2, s.rouge2), report(Metric::RougeL, s.rouge_l)]
        }
        Task::Hi => {
            let (po, go) = (extract(&p, "predictions", as_option)?, extract(&g, "gold", as_option)?);
            vec![report(Metric::HallucinationIndex, hallucination_index(&po, &go)?)]
        }
    };
    Ok(reports)
}

/// Reads `{id, value}` files and scores them; `agreement` names a file of
/// `{id, annotator, label}` records restricting scoring to items both
/// annotators labeled identically.
pub fn evaluate_task(
    task: Task,
    predictions: &Path,
    gold: &Path,
    agreement: Option<&Path>,
) -> Result<Vec<MetricReport>, MetricError> {
    let pred = read_values(predictions)?;
    let gold = read_values(gold)?;
    let keep = match agreement {
        Some(path) => Some(agreed_ids(&read_annotations(path)?)?),
        None => None,
    };
    evaluate_values(task, &pred, &gold, keep.as_ref())
}
