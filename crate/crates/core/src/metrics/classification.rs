use super::{check_lengths, MetricError};

/// Trimmed, casefolded label.
pub fn normalize_label(s: &str) -> String {
    s.trim().to_lowercase()
}

/// Fraction of positions whose normalized labels agree.
pub fn accuracy<P: AsRef<str>, G: AsRef<str>>(pred: &[P], gold: &[G]) -> Result<f64, MetricError> {
    check_lengths(pred.len(), gold.len())?;
    let hits = pred
        .iter()
        .zip(gold)
        .filter(|(p, g)| normalize_label(p.as_ref()) == normalize_label(g.as_ref()))
        .count();
    Ok(hits as f64 / gold.len() as f64)
}

/// Share of multiple-choice answers that pick the correct option.
pub fn hallucination_index(responses: &[usize], keys: &[usize]) -> Result<f64, MetricError> {
    check_lengths(responses.len(), keys.len())?;
    let hits = responses.iter().zip(keys).filter(|(r, k)| r == k).count();
    Ok(hits as f64 / keys.len() as f64)
}
