/// Splits text into the units every stage counts and compares.
pub trait Tokenizer: Send + Sync {
    /// Stable identifier, folded into config digests.
    fn name(&self) -> &'static str;

    fn tokenize<'a>(&self, text: &'a str) -> Vec<&'a str>;

    fn count(&self, text: &str) -> usize {
        self.tokenize(text).len()
    }
}

/// Whitespace split, then each maximal alphanumeric run is one token and every
/// other non-space character is a token of its own.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReferenceTokenizer;

impl Tokenizer for ReferenceTokenizer {
    fn name(&self) -> &'static str {
        "reference-ws-punct-v1"
    }

    fn tokenize<'a>(&self, text: &'a str) -> Vec<&'a str> {
        tokenize(text)
    }

    fn count(&self, text: &str) -> usize {
        count_tokens(text)
    }
}

pub fn tokenize(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, c) in text.char_indices() {
        if c.is_alphanumeric() {
            if run_start.is_none() {
                run_start = Some(i);
            }
            continue;
        }
        if let Some(s) = run_start.take() {
            out.push(&text[s..i]);
        }
        if !c.is_whitespace() {
            out.push(&text[i..i + c.len_utf8()]);
        }
    }
    if let Some(s) = run_start {
        out.push(&text[s..]);
    }
    out
}

pub fn count_tokens(text: &str) -> usize {
    let mut n = 0;
    let mut in_run = false;
    for c in text.chars() {
        if c.is_alphanumeric() {
            if !in_run {
                n += 1;
                in_run = true;
            }
        } else {
            in_run = false;
            if !c.is_whitespace() {
                n += 1;
            }
        }
    }
    n
}
