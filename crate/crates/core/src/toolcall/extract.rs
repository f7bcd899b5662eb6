use super::parse::{ParseOptions, Parser};
use super::{Function, ToolExpr};

/// Finds the last maximal well-formed program in free-form model output.
/// Bare numbers do not count as programs.
pub fn extract_program(model_output: &str) -> Option<ToolExpr> {
    extract_program_with(model_output, ParseOptions::default())
}

pub fn extract_program_with(model_output: &str, opts: ParseOptions) -> Option<ToolExpr> {
    let mut spans: Vec<(usize, usize, ToolExpr)> = Vec::new();
    for start in candidate_starts(model_output) {
        // Nested calls inside an already-found span are not maximal.
        if spans.iter().any(|(s, e, _)| *s <= start && start < *e) {
            continue;
        }
        let mut p = Parser::at(model_output, start, opts);
        if let Ok(expr @ ToolExpr::Call(..)) = p.expr(0) {
            spans.push((start, p.pos, expr));
        }
    }
    spans.pop().map(|(_, _, e)| e)
}

fn candidate_starts(text: &str) -> Vec<usize> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    for f in Function::ALL {
        for (i, _) in text.match_indices(f.name()) {
            let boundary = i == 0 || !(bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'_');
            if boundary {
                out.push(i);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolcall::parse_program;

    #[test]
    fn examples() {
        assert_eq!(
            extract_program("The answer is Add(1, 2)"),
            Some(parse_program("Add(1, 2)").unwrap())
        );
        assert_eq!(extract_program("no math here"), None);
        assert_eq!(
            extract_program("first Add(1,2) then Multiply(2,3)"),
            Some(parse_program("Multiply(2, 3)").unwrap())
        );
    }

    #[test]
    fn nested_program_is_taken_whole() {
        assert_eq!(
            extract_program("So: Subtract(Multiply(4, 5), Add(1, 2)). Done."),
            Some(parse_program("Subtract(Multiply(4, 5), Add(1, 2))").unwrap())
        );
    }

    #[test]
    fn broken_trailing_program_falls_back_to_earlier_one() {
        assert_eq!(
            extract_program("Add(1, 2) and then Multiply(3,"),
            Some(parse_program("Add(1, 2)").unwrap())
        );
        assert_eq!(extract_program("MyAdd(1, 2)"), None);
    }
}
