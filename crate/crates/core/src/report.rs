//! Human-readable tables for manifests, metric reports and agreement
//! statistics. The machine form of each is its JSON serialization.

use std::fmt::Write;

use crate::builders::InstructionSummary;
use crate::corpus::Manifest;
use crate::metrics::{category_tallies, AgreementReport, MetricReport};

#[derive(Clone, Copy, PartialEq)]
enum Align {
    Left,
    Right,
}

/// Renders rows as space-padded columns; the first row is the header.
fn table(rows: &[Vec<String>], align: &[Align]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            let pad = widths[c] - cell.chars().count();
            match align.get(c).copied().unwrap_or(Align::Left) {
                Align::Left => {
                    line.push_str(cell);
                    line.extend(std::iter::repeat_n(' ', pad));
                }
                Align::Right => {
                    line.extend(std::iter::repeat_n(' ', pad));
                    line.push_str(cell);
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Stage table with a totals row, followed by the per-source resource table
/// when the manifest carries one.
pub fn render_manifest(m: &Manifest) -> String {
    use Align::*;
    let mut out = String::new();
    let _ = writeln!(out, "pipeline {}  config {}", m.pipeline_version, m.config_digest);
    let mut rows = vec![["Stage", "Docs In", "Docs Out", "Tokens In", "Tokens Out", "Removed"]
        .map(String::from)
        .to_vec()];
    for s in &m.stages {
        rows.push(vec![
            s.stage.to_string(),
            s.docs_in.to_string(),
            s.docs_out.to_string(),
            s.tokens_in.to_string(),
            s.tokens_out.to_string(),
            s.removed().to_string(),
        ]);
    }
    if let (Some(first), Some(last)) = (m.stages.first(), m.stages.last()) {
        rows.push(vec![
            "Total".into(),
            first.docs_in.to_string(),
            last.docs_out.to_string(),
            first.tokens_in.to_string(),
            last.tokens_out.to_string(),
            m.stages.iter().map(|s| s.removed()).sum::<u64>().to_string(),
        ]);
    }
    out.push_str(&table(&rows, &[Left, Right, Right, Right, Right, Right]));
    if !m.sources.is_empty() {
        out.push('\n');
        let mut rows = vec![["Dataset", "Documents", "Tokens", "Deduplicated Tokens"].map(String::from).to_vec()];
        let (mut docs, mut toks, mut dedup) = (0u64, 0u64, 0u64);
        for s in &m.sources {
            docs += s.documents;
            toks += s.tokens;
            dedup += s.dedup_tokens;
            rows.push(vec![
                s.source.display_name().to_string(),
                s.documents.to_string(),
                s.tokens.to_string(),
                s.dedup_tokens.to_string(),
            ]);
        }
        rows.push(vec!["Total".into(), docs.to_string(), toks.to_string(), dedup.to_string()]);
        out.push_str(&table(&rows, &[Left, Right, Right, Right]));
    }
    out
}

/// One line per report: `<label>  <value>  n=<count>`.
pub fn render_metrics(reports: &[MetricReport]) -> String {
    reports
        .iter()
        .map(|r| format!("{}  {:.4}  n={}\n", r.metric.label(), r.value, r.n))
        .collect()
}

pub fn render_agreement(r: &AgreementReport, labels: Option<&[String]>) -> String {
    let mut out = format!(
        "kappa  {:.4}\np_o    {:.4}\np_e    {:.4}\nn      {}\n",
        r.kappa, r.observed_agreement, r.expected_agreement, r.n
    );
    if let Some(labels) = labels {
        let rows: Vec<Vec<String>> = category_tallies(labels)
            .into_iter()
            .map(|(c, n)| vec![c, n.to_string()])
            .collect();
        out.push('\n');
        out.push_str(&table(&rows, &[Align::Left, Align::Right]));
    }
    out
}

pub fn render_instruction_summary(s: &InstructionSummary) -> String {
    let mut rows = vec![vec!["Source".to_string(), "Records".to_string()]];
    rows.extend(s.sources.iter().map(|(name, n)| vec![name.clone(), n.to_string()]));
    rows.push(vec!["Total".into(), s.total.to_string()]);
    rows.push(vec!["Total after deduplication".into(), s.total_after_dedup.to_string()]);
    table(&rows, &[Align::Left, Align::Right])
}
