//! Resumable-run signature cache.
//!
//! Newline-delimited JSON. The first line is a header
//! `{"format":"finset-minhash-cache","version":1,"config_digest":"<hex>"}`;
//! each following line is `{"id":..,"text_hash":"<hex>","seed":..,"values":[..]}`.
//! A cache is only valid for the config digest in its header.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use xxhash_rust::xxh3::xxh3_64;

use super::{DedupError, MinHashSignature};
use crate::corpus::Document;

const FORMAT: &str = "finset-minhash-cache";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    config_digest: String,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    id: String,
    text_hash: String,
    seed: u64,
    values: Vec<u64>,
}

#[derive(Debug, Clone, Default)]
pub struct SignatureCache {
    config_digest: String,
    entries: BTreeMap<String, (u64, MinHashSignature)>,
}

impl SignatureCache {
    pub fn new(config_digest: impl Into<String>) -> Self {
        SignatureCache {
            config_digest: config_digest.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn config_digest(&self) -> &str {
        &self.config_digest
    }

    pub fn lookup(&self, doc: &Document) -> Option<MinHashSignature> {
        let (h, sig) = self.entries.get(&doc.id)?;
        (*h == xxh3_64(doc.text.as_bytes())).then(|| sig.clone())
    }

    pub fn store(&mut self, doc: &Document, sig: &MinHashSignature) {
        self.entries
            .insert(doc.id.clone(), (xxh3_64(doc.text.as_bytes()), sig.clone()));
    }

    /// Loads a cache, failing if it was written under a different config.
    pub fn load(path: &Path, expected_digest: &str) -> Result<Self, DedupError> {
        let io = |e: std::io::Error| DedupError::Cache(format!("{}: {e}", path.display()));
        let mut lines = BufReader::new(File::open(path).map_err(io)?).lines();
        let header: Header = match lines.next() {
            Some(l) => serde_json::from_str(&l.map_err(io)?)
                .map_err(|e| DedupError::Cache(format!("bad header: {e}")))?,
            None => return Err(DedupError::Cache("empty cache file".into())),
        };
        if header.format != FORMAT || header.version != VERSION {
            return Err(DedupError::Cache(format!(
                "unsupported format {} v{}",
                header.format, header.version
            )));
        }
        if header.config_digest != expected_digest {
            return Err(DedupError::Cache(format!(
                "written for config {}, current config is {expected_digest}",
                header.config_digest
            )));
        }
        let mut cache = SignatureCache::new(header.config_digest);
        for (i, line) in lines.enumerate() {
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            let e: Entry = serde_json::from_str(&line)
                .map_err(|err| DedupError::Cache(format!("line {}: {err}", i + 2)))?;
            let h = u64::from_str_radix(&e.text_hash, 16)
                .map_err(|err| DedupError::Cache(format!("line {}: {err}", i + 2)))?;
            let sig = MinHashSignature {
                doc_id: e.id.clone(),
                values: e.values,
                seed: e.seed,
            };
            cache.entries.insert(e.id, (h, sig));
        }
        Ok(cache)
    }

    pub fn save(&self, path: &Path) -> Result<(), DedupError> {
        let io = |e: std::io::Error| DedupError::Cache(format!("{}: {e}", path.display()));
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        let header = Header {
            format: FORMAT.into(),
            version: VERSION,
            config_digest: self.config_digest.clone(),
        };
        let json = |e: serde_json::Error| DedupError::Cache(e.to_string());
        writeln!(w, "{}", serde_json::to_string(&header).map_err(json)?).map_err(io)?;
        for (id, (h, sig)) in &self.entries {
            let e = Entry {
                id: id.clone(),
                text_hash: format!("{h:016x}"),
                seed: sig.seed,
                values: sig.values.clone(),
            };
            writeln!(w, "{}", serde_json::to_string(&e).map_err(json)?).map_err(io)?;
        }
        w.flush().map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use crate::dedup::{minhash_signature, shingle, DedupConfig};

    #[test]
    fn save_load_and_digest_check() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sig.cache");
        let d = Document::new("a", "one two three four five six seven", Source::Sec);
        let sig = minhash_signature("a", &shingle(&d.text, 5), &DedupConfig::default());
        let mut c = SignatureCache::new("abc");
        c.store(&d, &sig);
        c.save(&p).unwrap();

        let back = SignatureCache::load(&p, "abc").unwrap();
        assert_eq!(back.lookup(&d), Some(sig));
        assert!(SignatureCache::load(&p, "other").is_err());

        let mut changed = d.clone();
        changed.set_text("different".into());
        assert_eq!(back.lookup(&changed), None);
    }
}
