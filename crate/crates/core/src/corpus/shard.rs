use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::document::DocumentRecord;
use super::{CorpusError, Document};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedLine {
    /// 1-based.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct ReadOutcome<T> {
    pub records: Vec<T>,
    pub skipped: Vec<SkippedLine>,
}

/// Reads newline-delimited records, converting each with `convert`. Blank
/// lines are ignored. In strict mode the first bad line aborts; otherwise bad
/// lines are skipped and reported.
pub fn read_jsonl_with<R, T, F>(path: &Path, strict: bool, mut convert: F) -> Result<ReadOutcome<T>, CorpusError>
where
    R: DeserializeOwned,
    F: FnMut(R) -> Result<T, String>,
{
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let mut out = ReadOutcome {
        records: Vec::new(),
        skipped: Vec::new(),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<R>(&line)
            .map_err(|e| e.to_string())
            .and_then(&mut convert);
        match parsed {
            Ok(rec) => out.records.push(rec),
            Err(reason) if strict => {
                return Err(CorpusError::Malformed {
                    path: path.to_path_buf(),
                    line: i + 1,
                    reason,
                })
            }
            Err(reason) => out.skipped.push(SkippedLine { line: i + 1, reason }),
        }
    }
    Ok(out)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path, strict: bool) -> Result<ReadOutcome<T>, CorpusError> {
    read_jsonl_with(path, strict, Ok)
}

/// Reads a document shard in file order.
pub fn read_shard(path: &Path, strict: bool) -> Result<ReadOutcome<Document>, CorpusError> {
    let mut seen = HashSet::new();
    read_jsonl_with(path, strict, |rec: DocumentRecord| {
        let d = Document::try_from(rec).map_err(|e| e.to_string())?;
        if seen.insert(d.id.clone()) {
            Ok(d)
        } else {
            Err(format!("duplicate id `{}`", d.id))
        }
    })
}

/// Writes any serializable records, one per line.
pub fn write_jsonl<T: Serialize>(records: &[T], path: &Path) -> Result<usize, CorpusError> {
    let file = File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let n = write_records(records, &mut w).map_err(|e| match e {
        CorpusError::Io { source, .. } => CorpusError::io(path, source),
        other => other,
    })?;
    w.flush().map_err(|e| CorpusError::io(path, e))?;
    Ok(n)
}

pub fn write_records<T: Serialize, W: Write>(records: &[T], w: &mut W) -> Result<usize, CorpusError> {
    for r in records {
        serde_json::to_writer(&mut *w, r)?;
        w.write_all(b"\n").map_err(|e| CorpusError::io("<writer>", e))?;
    }
    Ok(records.len())
}

/// Writes documents in the canonical line format. Duplicate ids are rejected
/// before anything is written.
pub fn write_shard(docs: &[Document], path: &Path) -> Result<usize, CorpusError> {
    let mut seen = HashSet::with_capacity(docs.len());
    for d in docs {
        if !seen.insert(d.id.as_str()) {
            return Err(CorpusError::DuplicateId(d.id.clone()));
        }
    }
    write_jsonl(docs, path)
}
