//! Binary index file.
//!
//! All integers little-endian; strings are a `u32` byte length followed by
//! UTF-8 bytes.
//!
//! ```text
//! magic        4 bytes  "FSIX"
//! version      u32
//! digest       string   config digest the index was built under
//! n_docs       u32
//! n_docs x     id: string, text: string, len: u32, date: i32 (days since
//!              0001-01-01, i32::MIN when undated)
//! n_terms      u32
//! n_terms x    term: string, n_postings: u32, n_postings x (doc: u32, tf: u32)
//! ```

use std::collections::BTreeMap;
use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use chrono::{Datelike, NaiveDate};

use super::{Index, IndexedDoc, RetrievalError};

pub const INDEX_MAGIC: &[u8; 4] = b"FSIX";
pub const INDEX_VERSION: u32 = 1;

const NO_DATE: i32 = i32::MIN;

fn write_str<W: Write>(w: &mut W, s: &str) -> std::io::Result<()> {
    w.write_u32::<LittleEndian>(s.len() as u32)?;
    w.write_all(s.as_bytes())
}

fn read_str<R: Read>(r: &mut R) -> Result<String, RetrievalError> {
    let n = r.read_u32::<LittleEndian>()? as u64;
    let mut buf = Vec::new();
    r.take(n).read_to_end(&mut buf)?;
    if buf.len() as u64 != n {
        return Err(RetrievalError::Format("truncated string".into()));
    }
    String::from_utf8(buf).map_err(|_| RetrievalError::Format("string is not UTF-8".into()))
}

pub fn save_index<W: Write>(index: &Index, digest: &str, w: &mut W) -> Result<(), RetrievalError> {
    w.write_all(INDEX_MAGIC)?;
    w.write_u32::<LittleEndian>(INDEX_VERSION)?;
    write_str(w, digest)?;
    w.write_u32::<LittleEndian>(index.docs.len() as u32)?;
    for d in &index.docs {
        write_str(w, &d.id)?;
        write_str(w, &d.text)?;
        w.write_u32::<LittleEndian>(d.len)?;
        w.write_i32::<LittleEndian>(d.date.map_or(NO_DATE, |d| d.num_days_from_ce()))?;
    }
    w.write_u32::<LittleEndian>(index.postings.len() as u32)?;
    for (term, postings) in &index.postings {
        write_str(w, term)?;
        w.write_u32::<LittleEndian>(postings.len() as u32)?;
        for &(doc, tf) in postings {
            w.write_u32::<LittleEndian>(doc)?;
            w.write_u32::<LittleEndian>(tf)?;
        }
    }
    Ok(())
}

/// Reads an index and returns it with the digest it was saved under. When
/// `expected_digest` is given, a different stored digest is an error.
pub fn load_index<R: Read>(r: &mut R, expected_digest: Option<&str>) -> Result<(Index, String), RetrievalError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != INDEX_MAGIC {
        return Err(RetrievalError::Format("not an index file (bad magic)".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != INDEX_VERSION {
        return Err(RetrievalError::Format(format!("unsupported version {version}")));
    }
    let digest = read_str(r)?;
    if let Some(expected) = expected_digest {
        if expected != digest {
            return Err(RetrievalError::DigestMismatch { expected: expected.to_string(), found: digest });
        }
    }
    let n_docs = r.read_u32::<LittleEndian>()?;
    let mut docs = Vec::with_capacity(n_docs.min(1 << 16) as usize);
    for _ in 0..n_docs {
        let id = read_str(r)?;
        let text = read_str(r)?;
        let len = r.read_u32::<LittleEndian>()?;
        let days = r.read_i32::<LittleEndian>()?;
        let date = if days == NO_DATE {
            None
        } else {
            Some(
                NaiveDate::from_num_days_from_ce_opt(days)
                    .ok_or_else(|| RetrievalError::Format(format!("bad date for {id:?}")))?,
            )
        };
        docs.push(IndexedDoc { id, text, date, len });
    }
    let n_terms = r.read_u32::<LittleEndian>()?;
    let mut postings = BTreeMap::new();
    for _ in 0..n_terms {
        let term = read_str(r)?;
        let n = r.read_u32::<LittleEndian>()?;
        let mut list = Vec::with_capacity(n.min(1 << 16) as usize);
        for _ in 0..n {
            let doc = r.read_u32::<LittleEndian>()?;
            let tf = r.read_u32::<LittleEndian>()?;
            if doc >= n_docs {
                return Err(RetrievalError::Format(format!("posting for {term:?} names document {doc}")));
            }
            list.push((doc, tf));
        }
        postings.insert(term, list);
    }
    Ok((Index::from_parts(docs, postings), digest))
}
