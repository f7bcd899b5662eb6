use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Document, Source};

pub const PIPELINE_VERSION: &str = concat!("finset-", env!("CARGO_PKG_VERSION"));

/// Curation stages in their fixed execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Url,
    Extract,
    Lang,
    Domain,
    Sensitive,
    FuzzyDedup,
    ExactDedup,
    Clean,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Url,
        Stage::Extract,
        Stage::Lang,
        Stage::Domain,
        Stage::Sensitive,
        Stage::FuzzyDedup,
        Stage::ExactDedup,
        Stage::Clean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Url => "url",
            Stage::Extract => "extract",
            Stage::Lang => "lang",
            Stage::Domain => "domain",
            Stage::Sensitive => "sensitive",
            Stage::FuzzyDedup => "fuzzy_dedup",
            Stage::ExactDedup => "exact_dedup",
            Stage::Clean => "clean",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown stage `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LedgerError {
    #[error("stage {stage}: output exceeds input ({what})")]
    Grew { stage: Stage, what: &'static str },
    #[error("stage {stage}: removal reasons sum to {reasons}, expected {expected}")]
    ReasonMismatch {
        stage: Stage,
        reasons: u64,
        expected: u64,
    },
    #[error("stage {later} listed after {earlier}")]
    OutOfOrder { earlier: Stage, later: Stage },
    #[error("stage {next} starts with {got} {what}, previous stage ended with {expected}")]
    Broken {
        next: Stage,
        what: &'static str,
        got: u64,
        expected: u64,
    },
}

/// Accounting for one stage: what went in, what came out, and why the rest
/// was removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: Stage,
    pub docs_in: u64,
    pub docs_out: u64,
    pub tokens_in: u64,
    pub tokens_out: u64,
    pub removed_reasons: BTreeMap<String, u64>,
    /// Lines dropped inside surviving documents (sensitive-line stage).
    #[serde(default, skip_serializing_if = "is_zero")]
    pub lines_removed: u64,
}

fn is_zero(n: &u64) -> bool {
    *n == 0
}

impl StageReport {
    pub fn empty(stage: Stage) -> Self {
        StageReport {
            stage,
            docs_in: 0,
            docs_out: 0,
            tokens_in: 0,
            tokens_out: 0,
            removed_reasons: BTreeMap::new(),
            lines_removed: 0,
        }
    }

    pub fn begin(stage: Stage, input: &[Document]) -> Self {
        let mut r = Self::empty(stage);
        r.docs_in = input.len() as u64;
        r.tokens_in = input.iter().map(|d| d.tokens).sum();
        r
    }

    pub fn drop_doc(&mut self, reason: &str) {
        *self.removed_reasons.entry(reason.to_string()).or_default() += 1;
    }

    pub fn finish(mut self, output: &[Document]) -> Self {
        self.docs_out = output.len() as u64;
        self.tokens_out = output.iter().map(|d| d.tokens).sum();
        self
    }

    pub fn removed(&self) -> u64 {
        self.removed_reasons.values().sum()
    }

    /// Combines reports for disjoint partitions of the same stage.
    pub fn merge(mut self, other: &StageReport) -> Self {
        debug_assert_eq!(self.stage, other.stage);
        self.docs_in += other.docs_in;
        self.docs_out += other.docs_out;
        self.tokens_in += other.tokens_in;
        self.tokens_out += other.tokens_out;
        self.lines_removed += other.lines_removed;
        for (k, v) in &other.removed_reasons {
            *self.removed_reasons.entry(k.clone()).or_default() += v;
        }
        self
    }

    pub fn check(&self) -> Result<(), LedgerError> {
        if self.docs_out > self.docs_in {
            return Err(LedgerError::Grew {
                stage: self.stage,
                what: "documents",
            });
        }
        if self.tokens_out > self.tokens_in {
            return Err(LedgerError::Grew {
                stage: self.stage,
                what: "tokens",
            });
        }
        let expected = self.docs_in - self.docs_out;
        if self.removed() != expected {
            return Err(LedgerError::ReasonMismatch {
                stage: self.stage,
                reasons: self.removed(),
                expected,
            });
        }
        Ok(())
    }
}

/// Per-source row of the resource ledger: input volume and what survived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceLedger {
    pub source: Source,
    pub documents: u64,
    pub tokens: u64,
    pub docs_out: u64,
    pub dedup_tokens: u64,
}

impl SourceLedger {
    /// Builds rows for every source present in `input`, in [`Source::ALL`] order.
    pub fn tally(input: &[Document], output: &[Document]) -> Vec<SourceLedger> {
        let mut rows: BTreeMap<Source, SourceLedger> = BTreeMap::new();
        for d in input {
            let row = rows.entry(d.source).or_insert_with(|| SourceLedger {
                source: d.source,
                documents: 0,
                tokens: 0,
                docs_out: 0,
                dedup_tokens: 0,
            });
            row.documents += 1;
            row.tokens += d.tokens;
        }
        for d in output {
            if let Some(row) = rows.get_mut(&d.source) {
                row.docs_out += 1;
                row.dedup_tokens += d.tokens;
            }
        }
        rows.into_values().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub pipeline_version: String,
    pub config_digest: String,
    pub stages: Vec<StageReport>,
    pub created_at: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<SourceLedger>,
}

impl Manifest {
    pub fn new(config_digest: impl Into<String>, stages: Vec<StageReport>, created_at: String) -> Self {
        Manifest {
            pipeline_version: PIPELINE_VERSION.to_string(),
            config_digest: config_digest.into(),
            stages,
            created_at,
            sources: Vec::new(),
        }
    }

    /// Checks every stage report plus ordering and chaining between stages.
    pub fn validate(&self) -> Result<(), LedgerError> {
        for s in &self.stages {
            s.check()?;
        }
        for w in self.stages.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if b.stage <= a.stage {
                return Err(LedgerError::OutOfOrder {
                    earlier: a.stage,
                    later: b.stage,
                });
            }
            if b.tokens_in != a.tokens_out {
                return Err(LedgerError::Broken {
                    next: b.stage,
                    what: "tokens",
                    got: b.tokens_in,
                    expected: a.tokens_out,
                });
            }
            if b.docs_in != a.docs_out {
                return Err(LedgerError::Broken {
                    next: b.stage,
                    what: "documents",
                    got: b.docs_in,
                    expected: a.docs_out,
                });
            }
        }
        Ok(())
    }
}
