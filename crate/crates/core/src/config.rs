//! Shared configuration for every command, loaded from TOML.
//!
//! The digest is a SHA-256 over the tokenizer name and the canonical JSON
//! form of the fully defaulted configuration, so two files that differ only
//! in layout, comments or spelled-out defaults share a digest.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{ReferenceTokenizer, Tokenizer};
use crate::curation::{CurationConfig, Curator};
use crate::dedup::DedupConfig;
use crate::retrieval::RetrievalConfig;
use crate::toolcall::ParseOptions;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToolcallConfig {
    /// Whether `Divide` is part of the program language.
    pub allow_divide: bool,
}

impl Default for ToolcallConfig {
    fn default() -> Self {
        ToolcallConfig { allow_divide: true }
    }
}

impl ToolcallConfig {
    pub fn parse_options(&self) -> ParseOptions {
        ParseOptions { allow_divide: self.allow_divide }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
#[derive(Default)]
pub struct CliConfig {
    pub curation: CurationConfig,
    pub dedup: DedupConfig,
    pub retrieval: RetrievalConfig,
    pub toolcall: ToolcallConfig,
    /// Seed for the dataset builders.
    pub seed: u64,
    /// Abort on the first malformed input record instead of skipping it.
    pub strict_io: bool,
}


impl CliConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        let cfg = Self::from_toml(&text)
            .map_err(|e| ConfigError::Parse { path: path.display().to_string(), message: e.to_string() })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every section, including that patterns compile.
    pub fn validate(&self) -> Result<(), ConfigError> {
        Curator::new(self.curation.clone()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.dedup.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.retrieval.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(())
    }

    /// Sets the seed used by the builders and by MinHash.
    pub fn apply_seed(&mut self, seed: u64) {
        self.seed = seed;
        self.dedup.seed = seed;
    }

    /// Hex SHA-256 of the tokenizer name and the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let mut h = Sha256::new();
        h.update(b"finset-config-v1\n");
        h.update(ReferenceTokenizer.name().as_bytes());
        h.update(b"\n");
        h.update(json.as_bytes());
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        let c = CliConfig::from_toml("").unwrap();
        assert_eq!(c, CliConfig::default());
        assert!(c.validate().is_ok());
        assert_eq!(c.digest().len(), 64);
    }

    #[test]
    fn digest_ignores_layout_but_not_content() {
        let a = CliConfig::from_toml("seed = 3\n[dedup]\nlsh_bands = 16\n").unwrap();
        let b = CliConfig::from_toml("seed=3 # comment\n\n[curation]\nmin_doc_tokens = 32\n[dedup]\nlsh_bands=16\n")
            .unwrap();
        assert_eq!(a.digest(), b.digest());
        let c = CliConfig::from_toml("seed = 4\n").unwrap();
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn toml_round_trip() {
        let mut c = CliConfig::default();
        c.apply_seed(99);
        c.retrieval.date_from = None;
        let back = CliConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.dedup.seed, 99);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(CliConfig::from_toml("sede = 1").is_err());
        let c = CliConfig::from_toml("[dedup]\nlsh_bands = 3\n").unwrap();
        assert!(c.validate().is_err());
        let c = CliConfig::from_toml("[curation]\nurl_block_patterns = [\"re:(\"]\n").unwrap();
        assert!(c.validate().is_err());
    }
}
