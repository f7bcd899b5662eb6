use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use finset_core::config::CliConfig;
use finset_core::corpus::{StageReport, PIPELINE_VERSION};
use serde::{Deserialize, Serialize};

use crate::{commands, Cli, Command, GlobalOpts};

/// Error classified by exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or configuration (exit 2).
    Usage(anyhow::Error),
    /// Runtime or data error (exit 1).
    Runtime(anyhow::Error),
}

macro_rules! runtime_errors {
    ($($t:ty),* $(,)?) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Runtime(e.into())
            }
        })*
    };
}

runtime_errors!(
    anyhow::Error,
    std::io::Error,
    serde_json::Error,
    finset_core::corpus::CorpusError,
    finset_core::curation::CurationError,
    finset_core::dedup::DedupError,
    finset_core::builders::BuilderError,
    finset_core::retrieval::RetrievalError,
    finset_core::metrics::MetricError,
    finset_core::toolcall::ParseError,
    finset_core::toolcall::EvalError,
);

pub fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow!("{msg}"))
}

pub type Result<T> = std::result::Result<T, Failure>;

/// Writes to stdout; a closed pipe (e.g. `| head`) ends output quietly.
pub fn out(text: &str) -> Result<()> {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

/// Shared state for one invocation.
pub struct Ctx {
    pub config: CliConfig,
    pub digest: String,
    pub opts: GlobalOpts,
    pub created_at: String,
}

impl Ctx {
    pub fn strict(&self) -> bool {
        self.opts.strict || self.config.strict_io
    }

    /// Writes `value` as pretty JSON with a trailing newline.
    pub fn write_json<T: Serialize>(&self, path: &Path, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value)?;
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn run_manifest(&self, command: &str, inputs: &[PathBuf], outputs: &[PathBuf]) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            pipeline_version: PIPELINE_VERSION.to_string(),
            config_digest: self.digest.clone(),
            seed: self.config.seed,
            created_at: self.created_at.clone(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
            stages: Vec::new(),
            details: serde_json::Value::Null,
        }
    }

    /// Prints either the JSON form of `value` or the rendered table.
    pub fn emit<T: Serialize>(&self, value: &T, table: impl FnOnce() -> String) -> Result<()> {
        if self.opts.json {
            out(&(serde_json::to_string_pretty(value)? + "\n"))
        } else {
            out(&table())
        }
    }
}

/// Provenance record written next to the outputs of the file-to-file
/// commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub pipeline_version: String,
    pub config_digest: String,
    pub seed: u64,
    pub created_at: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageReport>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

/// `<output>.manifest.json`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Fails unless the manifest at `path` was produced under `digest`.
pub fn check_manifest_digest(path: &Path, digest: &str) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let found = v
        .get("config_digest")
        .and_then(|d| d.as_str())
        .ok_or_else(|| anyhow!("{} has no config_digest", path.display()))?;
    if found != digest {
        return Err(Failure::Runtime(anyhow!(
            "{} was produced under config digest {found}, but the current config digest is {digest}",
            path.display()
        )));
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("FINSET_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| usage(format!("FINSET_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(anyhow!("thread pool: {e}")))
}

fn load_config(opts: &GlobalOpts) -> Result<CliConfig> {
    let mut config = match &opts.config {
        Some(path) => CliConfig::load(path).map_err(|e| Failure::Usage(e.into()))?,
        None => CliConfig::default(),
    };
    if let Some(seed) = opts.seed {
        config.apply_seed(seed);
    }
    if opts.strict {
        config.strict_io = true;
    }
    Ok(config)
}

pub fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let config = load_config(&cli.global)?;
    let created_at = if cli.global.deterministic {
        "1970-01-01T00:00:00Z".to_string()
    } else {
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
    };
    let ctx = Ctx { digest: config.digest(), config, opts: cli.global, created_at };
    match cli.command {
        Command::Curate { stages, paths } => commands::curate(&ctx, stages, paths),
        Command::Dedup { cache, paths } => commands::dedup(&ctx, cache, paths),
        Command::Instructions { input, output, threshold } => commands::instructions(&ctx, &input, &output, threshold),
        Command::Prefs { input, output } => commands::prefs(&ctx, &input, &output),
        Command::Mcq { input, output, tsv, k } => commands::mcq(&ctx, &input, &output, tsv.as_deref(), k),
        Command::Index { paths } => commands::index(&ctx, paths),
        Command::Search { index, query, top_k } => commands::search(&ctx, &index, &query, top_k),
        Command::Prompt(args) => commands::prompt(&ctx, args),
        Command::Toolcall { action } => commands::toolcall(&ctx, action),
        Command::Score { task, predictions, gold, agreement, manifest } => {
            commands::score(&ctx, &task, &predictions, &gold, agreement.as_deref(), manifest.as_deref())
        }
        Command::Agreement { annotations } => commands::agreement(&ctx, &annotations),
        Command::Report { path } => commands::report(&ctx, &path),
    }
}
