use std::collections::BTreeMap;

use super::Curator;
use crate::corpus::Document;

/// Email addresses, phone numbers, SSN-like 9-digit sequences and 16-digit
/// card-like sequences.
pub fn default_sensitive_patterns() -> BTreeMap<String, String> {
    [
        ("email", r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}"),
        (
            "phone",
            r"(?:^|[^\d])(?:\+\d{1,3}[\s.-]?)?(?:\(\d{3}\)\s?|\d{3}[\s.-])\d{3}[\s.-]\d{4}\b",
        ),
        ("ssn", r"\b(?:\d{3}-\d{2}-\d{4}|\d{9})\b"),
        ("card", r"\b(?:\d{4}[ -]?){3}\d{4}\b"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Removes every line matching any sensitive pattern. Returns the document
/// (token count refreshed) and the number of lines removed.
pub fn filter_sensitive_lines(doc: Document, curator: &Curator) -> (Document, usize) {
    let lines: Vec<&str> = doc.text.split('\n').collect();
    let kept: Vec<&str> = lines
        .iter()
        .copied()
        .filter(|l| !curator.sensitive.iter().any(|(_, re)| re.is_match(l)))
        .collect();
    let removed = lines.len() - kept.len();
    if removed == 0 {
        return (doc, 0);
    }
    let text = kept.join("\n");
    let mut doc = doc;
    doc.set_text(text);
    (doc, removed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Source;
    use crate::curation::CurationConfig;

    fn run(text: &str) -> (String, usize) {
        let c = Curator::new(CurationConfig::default()).unwrap();
        let (d, n) = filter_sensitive_lines(Document::new("d", text, Source::Sec), &c);
        assert_eq!(d.tokens as usize, crate::corpus::count_tokens(&d.text));
        (d.text, n)
    }

    #[test]
    fn examples() {
        assert_eq!(
            run("Q2 revenue grew.\nContact: a@b.com"),
            ("Q2 revenue grew.".to_string(), 1)
        );
        assert_eq!(run("nothing to see\nhere"), ("nothing to see\nhere".to_string(), 0));
        assert_eq!(run("a@b.com\ncall 555-123-4567"), (String::new(), 2));
    }

    #[test]
    fn each_default_pattern() {
        for line in [
            "mail me at jane.doe@example.org",
            "phone (555) 123-4567",
            "phone +1 555 123 4567",
            "ssn 123-45-6789",
            "id 123456789",
            "card 4111 1111 1111 1111",
            "card 4111111111111111",
        ] {
            assert_eq!(run(line).1, 1, "{line}");
        }
        for line in [
            "revenue of $1,234,567 in 2023",
            "shares rose 12.5% to 1040",
            "fiscal 2022 and 2023",
        ] {
            assert_eq!(run(line).1, 0, "{line}");
        }
    }

    #[test]
    fn idempotent() {
        let (once, _) = run("keep\nx@y.com\nkeep too");
        let (twice, n) = run(&once);
        assert_eq!(once, twice);
        assert_eq!(n, 0);
    }
}
