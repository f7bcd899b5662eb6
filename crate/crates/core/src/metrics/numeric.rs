use std::str::FromStr;

use bigdecimal::{BigDecimal, Zero};

use super::{check_lengths, MetricError};
use crate::toolcall::{eval_program, extract_program};

pub const DEFAULT_REL_TOL: f64 = 1e-4;

/// Parses a numeric answer after stripping whitespace, a `$` (before or after
/// the sign) and commas; a trailing `%` divides by 100.
pub fn canonical_number(s: &str) -> Option<BigDecimal> {
    let mut t: String = s.trim().chars().filter(|c| *c != ',' && !c.is_whitespace()).collect();
    let percent = t.ends_with('%');
    if percent {
        t.pop();
    }
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => ("-", r),
        None => ("", t.strip_prefix('+').unwrap_or(&t)),
    };
    let rest = rest.strip_prefix('$').unwrap_or(rest);
    let rest = match rest.strip_prefix('-') {
        Some(r) if sign.is_empty() => return canonical_tail("-", r, percent),
        _ => rest,
    };
    canonical_tail(sign, rest, percent)
}

fn canonical_tail(sign: &str, digits: &str, percent: bool) -> Option<BigDecimal> {
    let valid = !digits.is_empty()
        && digits.chars().all(|c| c.is_ascii_digit() || c == '.')
        && digits.chars().filter(|c| *c == '.').count() <= 1
        && digits.chars().any(|c| c.is_ascii_digit());
    if !valid {
        return None;
    }
    let v = BigDecimal::from_str(&format!("{sign}{digits}")).ok()?;
    Some(if percent { v / BigDecimal::from(100) } else { v })
}

/// The numeric value a prediction stands for: the evaluated last program in
/// it if there is one, otherwise the prediction read as a number.
pub fn prediction_value(pred: &str) -> Option<BigDecimal> {
    match extract_program(pred) {
        Some(expr) => eval_program(&expr).ok(),
        None => canonical_number(pred),
    }
}

/// `|p - g| <= rel_tol * max(|p|, |g|)`.
pub fn numeric_match(p: &BigDecimal, g: &BigDecimal, rel_tol: f64) -> bool {
    let tol = BigDecimal::from_str(&format!("{rel_tol:e}")).unwrap_or_else(|_| BigDecimal::zero());
    let diff = (p - g).abs();
    let scale = if p.abs() > g.abs() { p.abs() } else { g.abs() };
    diff <= tol * scale
}

fn normalize_text(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Fraction of predictions matching gold numerically within `rel_tol`; when
/// the gold answer is not numeric, normalized strings are compared instead.
/// A prediction whose program fails to evaluate counts as wrong.
pub fn exact_match_numeric<P: AsRef<str>, G: AsRef<str>>(
    pred: &[P],
    gold: &[G],
    rel_tol: f64,
) -> Result<f64, MetricError> {
    check_lengths(pred.len(), gold.len())?;
    let hits = pred
        .iter()
        .zip(gold)
        .filter(|(p, g)| {
            let (p, g) = (p.as_ref(), g.as_ref());
            match (canonical_number(g), extract_program(p)) {
                (Some(gv), Some(expr)) => eval_program(&expr).is_ok_and(|pv| numeric_match(&pv, &gv, rel_tol)),
                (Some(gv), None) => match canonical_number(p) {
                    Some(pv) => numeric_match(&pv, &gv, rel_tol),
                    None => normalize_text(p) == normalize_text(g),
                },
                (None, _) => normalize_text(p) == normalize_text(g),
            }
        })
        .count();
    Ok(hits as f64 / gold.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn em(p: &str, g: &str) -> bool {
        exact_match_numeric(&[p], &[g], DEFAULT_REL_TOL).unwrap() == 1.0
    }

    #[test]
    fn examples() {
        assert!(em("Add(2, 3)", "5"));
        assert!(em("$1,000", "1000"));
        assert!(em("17.0001", "17"));
        assert!(!em("17.1", "17"));
    }

    #[test]
    fn program_inside_prose_and_percent() {
        assert!(em("So the answer is Multiply(50%, 200).", "100"));
        assert!(em("12.5%", "0.125"));
        assert!(em("-$3", "-3"));
        assert!(em("$-3", "-3"));
    }

    #[test]
    fn failures_count_as_wrong() {
        assert!(!em("Divide(1, 0)", "0"));
        assert!(!em("about five", "5"));
        assert!(!em("0.0001", "0"));
        assert!(em("0", "0.0"));
    }

    #[test]
    fn non_numeric_gold_uses_text() {
        assert!(em("  Yes ", "yes"));
        assert!(!em("no", "yes"));
    }

    #[test]
    fn canonical_forms() {
        let n = |s: &str| canonical_number(s).map(|v| v.normalized().to_string());
        assert_eq!(n("1,234.50"), Some("1234.5".into()));
        assert_eq!(n("5%"), Some("0.05".into()));
        assert_eq!(n("abc"), None);
        assert_eq!(n("."), None);
        assert_eq!(n("1.2.3"), None);
        assert_eq!(prediction_value("Subtract(10, 4)").map(|v| v.normalized().to_string()), Some("6".into()));
    }
}
