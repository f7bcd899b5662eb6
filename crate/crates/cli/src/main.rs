//! `finset`: one binary for every curation stage, dataset builder, retrieval
//! step and metric, sharing a single TOML configuration.
//!
//! Exit status is 0 on success, 1 on runtime or data errors and 2 on usage or
//! configuration errors. Diagnostics go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod run;

use run::Failure;

#[derive(Debug, Parser)]
#[command(name = "finset", version, about = "Financial corpus curation, dataset building and evaluation")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for builders and MinHash; overrides the config file.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Abort on the first malformed input record.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    /// Zero timestamps so that reruns produce byte-identical files.
    #[arg(long, global = true)]
    pub deterministic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run curation stages over document shards.
    Curate {
        /// Comma-separated stages in pipeline order (default: all).
        #[arg(long, value_delimiter = ',')]
        stages: Option<Vec<String>>,
        /// Input shards followed by the output directory.
        #[arg(required = true, num_args = 2.., value_name = "SHARDS... OUT_DIR")]
        paths: Vec<PathBuf>,
    },
    /// Fuzzy then exact deduplication of document shards.
    Dedup {
        /// MinHash signature cache, read if present and rewritten afterwards.
        #[arg(long, value_name = "PATH")]
        cache: Option<PathBuf>,
        /// Input shards followed by the output directory.
        #[arg(required = true, num_args = 2.., value_name = "SHARDS... OUT_DIR")]
        paths: Vec<PathBuf>,
    },
    /// Deduplicate instruction records and drop non-financial ones.
    Instructions {
        input: PathBuf,
        output: PathBuf,
        /// Domain-score threshold (default: curation.domain_threshold).
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Build preference pairs.
    Prefs { input: PathBuf, output: PathBuf },
    /// Build definition multiple-choice items from a glossary.
    Mcq {
        input: PathBuf,
        output: PathBuf,
        /// Also write the tab-separated form here.
        #[arg(long, value_name = "PATH")]
        tsv: Option<PathBuf>,
        /// Distractors per item.
        #[arg(short, long, default_value_t = 3)]
        k: usize,
    },
    /// Build a BM25 index file from document shards.
    Index {
        /// Input shards followed by the index file.
        #[arg(required = true, num_args = 2.., value_name = "SHARDS... INDEX")]
        paths: Vec<PathBuf>,
    },
    /// Query an index file.
    Search {
        index: PathBuf,
        query: String,
        #[arg(long, value_name = "N")]
        top_k: Option<usize>,
    },
    /// Render an answer prompt, or the stages of the retrieval chain.
    Prompt(PromptArgs),
    /// Tool-call programs.
    Toolcall {
        #[command(subcommand)]
        action: ToolcallAction,
    },
    /// Score predictions against gold records.
    Score {
        #[arg(long)]
        task: String,
        predictions: PathBuf,
        gold: PathBuf,
        /// Annotation records; only items both annotators labeled alike are scored.
        #[arg(long, value_name = "PATH")]
        agreement: Option<PathBuf>,
        /// Manifest of the run that produced the predictions; its config
        /// digest must match the current one.
        #[arg(long, value_name = "PATH")]
        manifest: Option<PathBuf>,
    },
    /// Cohen's kappa and grade tallies from annotation records.
    Agreement { annotations: PathBuf },
    /// Print a manifest or metric report file.
    Report { path: PathBuf },
}

#[derive(Debug, Args)]
pub struct PromptArgs {
    #[arg(long)]
    pub question: String,
    /// Context section text, read from a file.
    #[arg(long, value_name = "PATH")]
    pub context: Option<PathBuf>,
    /// Retrieval section text, read from a file.
    #[arg(long, value_name = "PATH")]
    pub retrieval: Option<PathBuf>,
    /// Replace the default persona.
    #[arg(long)]
    pub persona: Option<String>,
    /// Replace the default instructions (repeatable).
    #[arg(long = "instruction")]
    pub instructions: Vec<String>,
    /// Omit the instructions section.
    #[arg(long, conflicts_with = "instructions")]
    pub no_instructions: bool,
    /// Source document for the retrieval chain; prints the extraction prompt
    /// unless --extracted is given.
    #[arg(long, value_name = "PATH")]
    pub document: Option<PathBuf>,
    /// First-stage output; prints the answer prompt with retrieved passages.
    #[arg(long, value_name = "PATH", requires = "document")]
    pub extracted: Option<PathBuf>,
    /// Index to retrieve passages from in chain mode.
    #[arg(long, value_name = "PATH")]
    pub index: Option<PathBuf>,
    #[arg(long, value_name = "N")]
    pub top_k: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ToolcallAction {
    /// Evaluate a program and print its value.
    Eval { program: String },
    /// Find the last program in free text and print it canonically.
    Extract { text: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
