//! Markup-to-text extraction.

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt", "figcaption",
    "footer", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p",
    "pre", "section", "table", "tbody", "thead", "tr", "ul",
];
const CELL_TAGS: &[&str] = &["td", "th"];
const DROPPED_BLOCKS: &[&str] = &["script", "style", "noscript", "template"];

/// Strips markup and returns body text: tags removed, script/style blocks and
/// image references dropped, entities decoded, whitespace collapsed to single
/// spaces with one newline between paragraphs. Applying it to its own output
/// changes nothing.
pub fn extract_text(raw: &str) -> String {
    let mut cur = single_pass(raw);
    // Decoding can expose new markup (`&lt;b&gt;`); iterate to a fixed point.
    // Every changing pass shortens the text, so this terminates.
    for _ in 0..64 {
        let next = single_pass(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn single_pass(raw: &str) -> String {
    let no_markup = strip_markup(raw);
    let no_images = strip_markdown_images(&no_markup);
    let decoded = decode_entities(&no_images);
    normalize_whitespace(&decoded)
}

fn strip_markup(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let lower = s.to_ascii_lowercase();
    let mut i = 0;
    while i < s.len() {
        let rest = &s[i..];
        if !rest.starts_with('<') {
            let c = rest.chars().next().expect("non-empty");
            out.push(c);
            i += c.len_utf8();
            continue;
        }
        if rest.starts_with("<!--") {
            i = match rest.find("-->") {
                Some(end) => i + end + 3,
                None => s.len(),
            };
            continue;
        }
        let Some(tag) = parse_tag(rest) else {
            out.push('<');
            i += 1;
            continue;
        };
        if !tag.closing && DROPPED_BLOCKS.contains(&tag.name.as_str()) {
            let close = format!("</{}", tag.name);
            i = match lower[i + tag.len..].find(&close) {
                Some(off) => {
                    let after = i + tag.len + off;
                    match s[after..].find('>') {
                        Some(gt) => after + gt + 1,
                        None => s.len(),
                    }
                }
                None => s.len(),
            };
            continue;
        }
        if BLOCK_TAGS.contains(&tag.name.as_str()) {
            out.push('\n');
        } else if CELL_TAGS.contains(&tag.name.as_str()) {
            out.push(' ');
        }
        i += tag.len;
    }
    out
}

struct Tag {
    name: String,
    closing: bool,
    len: usize,
}

/// Recognizes `<name ...>`, `</name>`, `<!...>` and `<?...>` at the start of
/// `s`. A `<` that does not open such a tag is literal text.
fn parse_tag(s: &str) -> Option<Tag> {
    let bytes = s.as_bytes();
    let first = *bytes.get(1)?;
    let (closing, name_start) = match first {
        b'/' => (true, 2),
        b'!' | b'?' => (false, 1),
        b if b.is_ascii_alphabetic() => (false, 1),
        _ => return None,
    };
    let end = s[1..].find(['>', '<']).map(|p| p + 1)?;
    if bytes[end] != b'>' {
        return None;
    }
    let name: String = s[name_start..end]
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase();
    if closing && name.is_empty() {
        return None;
    }
    Some(Tag {
        name,
        closing,
        len: end + 1,
    })
}

/// Removes `![alt](target)` references.
fn strip_markdown_images(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find("![") {
        let after = &rest[pos + 2..];
        let close = after.find("](").and_then(|alt_end| {
            let target = &after[alt_end + 2..];
            target
                .find(')')
                .filter(|&t| !target[..t].contains(['\n', ' ']) && !after[..alt_end].contains('\n'))
                .map(|t| pos + 2 + alt_end + 2 + t + 1)
        });
        match close {
            Some(end) => {
                out.push_str(&rest[..pos]);
                rest = &rest[end..];
            }
            None => {
                out.push_str(&rest[..pos + 2]);
                rest = &rest[pos + 2..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn named_entity(name: &str) -> Option<char> {
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        "ndash" => '\u{2013}',
        "mdash" => '\u{2014}',
        "hellip" => '\u{2026}',
        "lsquo" => '\u{2018}',
        "rsquo" => '\u{2019}',
        "ldquo" => '\u{201C}',
        "rdquo" => '\u{201D}',
        "copy" => '\u{A9}',
        "reg" => '\u{AE}',
        "trade" => '\u{2122}',
        "euro" => '\u{20AC}',
        "pound" => '\u{A3}',
        "yen" => '\u{A5}',
        "cent" => '\u{A2}',
        "sect" => '\u{A7}',
        "deg" => '\u{B0}',
        "times" => '\u{D7}',
        "divide" => '\u{F7}',
        _ => return None,
    })
}

fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp..];
        let decoded = tail[1..].find(';').filter(|&semi| semi <= 10).and_then(|semi| {
            let body = &tail[1..1 + semi];
            let c = if let Some(num) = body.strip_prefix('#') {
                let code = match num.strip_prefix(['x', 'X']) {
                    Some(hex) => u32::from_str_radix(hex, 16).ok(),
                    None => num.parse::<u32>().ok(),
                };
                code.and_then(char::from_u32)
            } else {
                named_entity(body)
            };
            c.map(|c| (c, semi + 2))
        });
        match decoded {
            Some((c, len)) => {
                out.push(c);
                rest = &tail[len..];
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn normalize_whitespace(s: &str) -> String {
    s.split('\n')
        .map(|line| line.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|line| !line.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}
