//! Evaluation metrics for the benchmark tasks, the hallucination index and
//! annotator agreement.
//!
//! Every corpus-level score lies in `[0, 1]` (kappa in `[-1, 1]`) and is
//! invariant under joint permutation of the aligned prediction/gold pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod agreement;
mod classification;
mod entity;
mod evaluate;
mod numeric;
mod rouge;

pub use agreement::{
    agreed_ids, category_tallies, cohens_kappa, cohens_kappa_from_table, kappa_from_annotations, AgreementReport,
    Annotation, DEFAULT_CATEGORIES,
};
pub use classification::{accuracy, hallucination_index, normalize_label};
pub use entity::{entity_f1, EntitySpan, PrfScores};
pub use evaluate::{evaluate_task, evaluate_values, read_values, ValueRecord};
pub use numeric::{canonical_number, exact_match_numeric, numeric_match, prediction_value, DEFAULT_REL_TOL};
pub use rouge::{lcs_len, rouge, rouge_pair, RougePair, RougeScores};

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("length mismatch: {pred} predictions vs {gold} gold records")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("no samples to score")]
    Empty,
    #[error("unknown task {0:?}")]
    UnknownTask(String),
    #[error("{file}: record {record}: {message}")]
    Schema { file: String, record: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid annotations: {0}")]
    Annotations(String),
}

pub(crate) fn check_lengths(pred: usize, gold: usize) -> Result<(), MetricError> {
    if pred != gold {
        return Err(MetricError::LengthMismatch { pred, gold });
    }
    if gold == 0 {
        return Err(MetricError::Empty);
    }
    Ok(())
}

/// The benchmark tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Chart understanding.
    Cu,
    /// Sentiment analysis.
    Sa,
    /// Named entity recognition.
    Ner,
    /// Number understanding (numeric question answering).
    Nu,
    /// Text summarization.
    Ts,
    /// Stock movement prediction.
    Smp,
    /// Credit scoring.
    Cs,
    /// Firm disclosure.
    Fd,
    /// Hallucination analysis (definition multiple choice).
    Hi,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::Cu,
        Task::Sa,
        Task::Ner,
        Task::Nu,
        Task::Ts,
        Task::Smp,
        Task::Cs,
        Task::Fd,
        Task::Hi,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Task::Cu => "cu",
            Task::Sa => "sa",
            Task::Ner => "ner",
            Task::Nu => "nu",
            Task::Ts => "ts",
            Task::Smp => "smp",
            Task::Cs => "cs",
            Task::Fd => "fd",
            Task::Hi => "hi",
        }
    }

    /// The metrics reported for this task.
    pub fn metrics(self) -> &'static [Metric] {
        match self {
            Task::Cu | Task::Sa | Task::Smp | Task::Cs | Task::Fd => &[Metric::Accuracy],
            Task::Ner => &[Metric::EntityF1],
            Task::Nu => &[Metric::ExactMatch],
            Task::Ts => &[Metric::Rouge1, Metric::Rouge2, Metric::RougeL],
            Task::Hi => &[Metric::HallucinationIndex],
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Task {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = match s.trim().to_lowercase().replace(['-', ' '], "_").as_str() {
            "cu" | "chart_understanding" => Task::Cu,
            "sa" | "sentiment" | "sentiment_analysis" => Task::Sa,
            "ner" | "named_entity_recognition" => Task::Ner,
            "nu" | "number_understanding" => Task::Nu,
            "ts" | "summarization" | "text_summarization" => Task::Ts,
            "smp" | "stock_movement" | "stock_movement_prediction" => Task::Smp,
            "cs" | "credit_scoring" => Task::Cs,
            "fd" | "firm_disclosure" => Task::Fd,
            "hi" | "hallucination" | "hallucination_analysis" => Task::Hi,
            _ => return Err(MetricError::UnknownTask(s.to_string())),
        };
        Ok(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "accuracy")]
    Accuracy,
    #[serde(rename = "entity_f1")]
    EntityF1,
    #[serde(rename = "exact_match")]
    ExactMatch,
    #[serde(rename = "rouge1")]
    Rouge1,
    #[serde(rename = "rouge2")]
    Rouge2,
    #[serde(rename = "rougeL")]
    RougeL,
    #[serde(rename = "hallucination_index")]
    HallucinationIndex,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::EntityF1 => "entity_f1",
            Metric::ExactMatch => "exact_match",
            Metric::Rouge1 => "rouge1",
            Metric::Rouge2 => "rouge2",
            Metric::RougeL => "rougeL",
            Metric::HallucinationIndex => "hallucination_index",
        }
    }

    /// Short label used in printed reports.
    pub fn label(self) -> &'static str {
        match self {
            Metric::HallucinationIndex => "HI",
            m => m.name(),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One scored metric for one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub task: Task,
    pub metric: Metric,
    pub value: f64,
    pub n: u64,
}

impl MetricReport {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.value) {
            return Err(format!("{} value {} outside [0, 1]", self.metric, self.value));
        }
        if self.n == 0 {
            return Err(format!("{} report has no samples", self.metric));
        }
        if !self.task.metrics().contains(&self.metric) {
            return Err(format!("metric {} does not apply to task {}", self.metric, self.task));
        }
        Ok(())
    }
}
