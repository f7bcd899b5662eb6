use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{check_lengths, MetricError};

/// Response-quality grades: A correct and satisfying, B acceptable with minor
/// flaws, C on-task with significant errors, D irrelevant or invalid.
pub const DEFAULT_CATEGORIES: [&str; 4] = ["A", "B", "C", "D"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub kappa: f64,
    pub observed_agreement: f64,
    pub expected_agreement: f64,
    pub n: u64,
    /// The default grades plus any other label seen, sorted.
    pub categories: Vec<String>,
}

/// Cohen's kappa between two annotators' labels over the same items.
///
/// When chance agreement is total (`p_e == 1`), kappa is 1 if the labels agree
/// everywhere and 0 otherwise.
pub fn cohens_kappa<A: AsRef<str>, B: AsRef<str>>(labels_a: &[A], labels_b: &[B]) -> Result<AgreementReport, MetricError> {
    check_lengths(labels_a.len(), labels_b.len())?;
    let n = labels_a.len() as f64;
    let mut ma: BTreeMap<&str, f64> = BTreeMap::new();
    let mut mb: BTreeMap<&str, f64> = BTreeMap::new();
    let mut agree = 0usize;
    for (a, b) in labels_a.iter().zip(labels_b) {
        let (a, b) = (a.as_ref(), b.as_ref());
        *ma.entry(a).or_default() += 1.0;
        *mb.entry(b).or_default() += 1.0;
        agree += usize::from(a == b);
    }
    let p_o = agree as f64 / n;
    let p_e: f64 = ma.iter().map(|(c, ca)| ca / n * mb.get(c).copied().unwrap_or(0.0) / n).sum();
    let kappa = if p_e >= 1.0 {
        if p_o >= 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (p_o - p_e) / (1.0 - p_e)
    };
    let categories: BTreeSet<String> = DEFAULT_CATEGORIES
        .iter()
        .map(|s| s.to_string())
        .chain(ma.keys().chain(mb.keys()).map(|s| s.to_string()))
        .collect();
    Ok(AgreementReport {
        kappa,
        observed_agreement: p_o,
        expected_agreement: p_e,
        n: labels_a.len() as u64,
        categories: categories.into_iter().collect(),
    })
}

/// Kappa from a square contingency table: `table[i][j]` counts items that
/// annotator A put in category `i` and annotator B in category `j`.
pub fn cohens_kappa_from_table(table: &[Vec<u64>]) -> Result<AgreementReport, MetricError> {
    let k = table.len();
    if table.iter().any(|row| row.len() != k) {
        return Err(MetricError::Annotations("contingency table is not square".into()));
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, row) in table.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            for _ in 0..count {
                a.push(format!("c{i}"));
                b.push(format!("c{j}"));
            }
        }
    }
    let mut r = cohens_kappa(&a, &b)?;
    r.categories = (0..k).map(|i| format!("c{i}")).collect();
    Ok(r)
}

/// Count per label, with every default grade present (possibly zero).
pub fn category_tallies<S: AsRef<str>>(labels: &[S]) -> BTreeMap<String, u64> {
    let mut t: BTreeMap<String, u64> = DEFAULT_CATEGORIES.iter().map(|c| (c.to_string(), 0)).collect();
    for l in labels {
        *t.entry(l.as_ref().to_string()).or_default() += 1;
    }
    t
}

/// One annotator's label for one item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub id: String,
    pub annotator: String,
    pub label: String,
}

/// Items labeled by exactly two annotators, as `id -> (label_a, label_b)`
/// with annotators in name order.
fn paired(records: &[Annotation]) -> Result<BTreeMap<&str, (&str, &str)>, MetricError> {
    let annotators: BTreeSet<&str> = records.iter().map(|r| r.annotator.as_str()).collect();
    if annotators.len() != 2 {
        return Err(MetricError::Annotations(format!("expected 2 annotators, found {}", annotators.len())));
    }
    let first = *annotators.iter().next().expect("two annotators");
    let mut by_id: BTreeMap<&str, (Option<&str>, Option<&str>)> = BTreeMap::new();
    for r in records {
        let slot = by_id.entry(&r.id).or_default();
        let side = if r.annotator == first { &mut slot.0 } else { &mut slot.1 };
        if side.replace(&r.label).is_some() {
            return Err(MetricError::Annotations(format!("{} labeled {:?} twice", r.annotator, r.id)));
        }
    }
    Ok(by_id
        .into_iter()
        .filter_map(|(id, (a, b))| Some((id, (a?, b?))))
        .collect())
}

/// Kappa over the items both annotators labeled.
pub fn kappa_from_annotations(records: &[Annotation]) -> Result<AgreementReport, MetricError> {
    let pairs = paired(records)?;
    let (a, b): (Vec<&str>, Vec<&str>) = pairs.values().copied().unzip();
    cohens_kappa(&a, &b)
}

/// Ids of items on which the two annotators gave the same label.
pub fn agreed_ids(records: &[Annotation]) -> Result<BTreeSet<String>, MetricError> {
    Ok(paired(records)?
        .into_iter()
        .filter(|(_, (a, b))| a == b)
        .map(|(id, _)| id.to_string())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_one() {
        let x = ["A", "B", "A", "C"];
        let r = cohens_kappa(&x, &x).unwrap();
        assert_eq!(r.kappa, 1.0);
        assert_eq!(r.categories, ["A", "B", "C", "D"]);
    }

    #[test]
    fn contingency_example() {
        let r = cohens_kappa_from_table(&[vec![20, 5], vec![10, 15]]).unwrap();
        assert!((r.observed_agreement - 0.7).abs() < 1e-12);
        assert!((r.expected_agreement - 0.5).abs() < 1e-12);
        assert!((r.kappa - 0.4).abs() < 1e-9);
        assert_eq!(r.n, 50);
    }

    #[test]
    fn degenerate_chance_agreement() {
        assert_eq!(cohens_kappa(&["A", "A"], &["A", "A"]).unwrap().kappa, 1.0);
        let r = cohens_kappa(&["A", "B"], &["B", "A"]).unwrap();
        assert_eq!(r.observed_agreement, 0.0);
        assert!(r.kappa < 0.0);
    }

    #[test]
    fn symmetric() {
        let a = ["A", "B", "B", "C", "D", "A"];
        let b = ["A", "B", "C", "C", "A", "A"];
        assert_eq!(cohens_kappa(&a, &b).unwrap().kappa, cohens_kappa(&b, &a).unwrap().kappa);
    }

    #[test]
    fn annotations() {
        let ann = |id: &str, who: &str, l: &str| Annotation { id: id.into(), annotator: who.into(), label: l.into() };
        let recs = vec![
            ann("1", "x", "A"),
            ann("1", "y", "A"),
            ann("2", "x", "B"),
            ann("2", "y", "C"),
            ann("3", "x", "D"),
        ];
        assert_eq!(agreed_ids(&recs).unwrap(), BTreeSet::from(["1".to_string()]));
        assert_eq!(kappa_from_annotations(&recs).unwrap().n, 2);
        let mut dup = recs.clone();
        dup.push(ann("1", "x", "B"));
        assert!(agreed_ids(&dup).is_err());
        assert!(agreed_ids(&recs[..1]).is_err());
    }

    #[test]
    fn tallies_include_all_grades() {
        let t = category_tallies(&["A", "A", "C"]);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), [("A".into(), 2), ("B".into(), 0), ("C".into(), 1), ("D".into(), 0)]);
    }
}
