use std::str::FromStr;

use bigdecimal::BigDecimal;

use super::{Function, ToolExpr};

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept `Divide`. When off, `Divide` is an unknown function.
    pub allow_divide: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { allow_divide: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("{func} takes exactly 2 arguments (byte {offset})")]
    Arity { func: &'static str, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownFunction { offset, .. }
            | ParseError::Arity { offset, .. } => *offset,
        }
    }
}

pub fn parse_program(text: &str) -> Result<ToolExpr, ParseError> {
    parse_program_with(text, ParseOptions::default())
}

pub fn parse_program_with(text: &str, opts: ParseOptions) -> Result<ToolExpr, ParseError> {
    let mut p = Parser::new(text, opts);
    let e = p.expr(0)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

pub(super) struct Parser<'a> {
    src: &'a [u8],
    pub(super) pos: usize,
    opts: ParseOptions,
}

impl<'a> Parser<'a> {
    pub(super) fn new(text: &'a str, opts: ParseOptions) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            opts,
        }
    }

    pub(super) fn at(text: &'a str, pos: usize, opts: ParseOptions) -> Self {
        Parser {
            src: text.as_bytes(),
            pos,
            opts,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{}`", byte as char)))
        }
    }

    pub(super) fn expr(&mut self, depth: usize) -> Result<ToolExpr, ParseError> {
        self.expr_grouped(depth, true).map(|(e, _)| e)
    }

    /// Returns the expression and whether a top-level number used thousands
    /// grouping (the caller may need to reparse it without).
    fn expr_grouped(&mut self, depth: usize, grouping: bool) -> Result<(ToolExpr, bool), ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.syntax("nesting too deep"));
        }
        self.skip_ws();
        match self.peek() {
            Some(b) if b.is_ascii_alphabetic() => self.call(depth).map(|e| (e, false)),
            Some(_) => self.number(grouping),
            None => Err(self.syntax("expected expression")),
        }
    }

    fn call(&mut self, depth: usize) -> Result<ToolExpr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let func = match Function::from_name(name) {
            Some(Function::Divide) if !self.opts.allow_divide => None,
            f => f,
        }
        .ok_or_else(|| ParseError::UnknownFunction {
            name: name.to_string(),
            offset: start,
        })?;
        self.expect(b'(')?;

        let first_start = self.pos;
        let (mut first, grouped) = self.expr_grouped(depth + 1, true)?;
        self.skip_ws();
        if grouped && self.peek() == Some(b')') {
            // `Add(1,200)`: the comma separates arguments, not thousands.
            self.pos = first_start;
            first = self.expr_grouped(depth + 1, false)?.0;
            self.skip_ws();
        }
        if self.peek() == Some(b')') {
            return Err(ParseError::Arity {
                func: func.name(),
                offset: self.pos,
            });
        }
        self.expect(b',')?;
        let second = self.expr(depth + 1)?;
        self.skip_ws();
        if self.peek() == Some(b',') {
            return Err(ParseError::Arity {
                func: func.name(),
                offset: self.pos,
            });
        }
        self.expect(b')')?;
        Ok(ToolExpr::call(func, first, second))
    }

    fn number(&mut self, grouping: bool) -> Result<(ToolExpr, bool), ParseError> {
        let start = self.pos;
        let mut digits = String::new();
        if let Some(sign @ (b'-' | b'+')) = self.peek() {
            if sign == b'-' {
                digits.push('-');
            }
            self.pos += 1;
        }
        if self.peek() == Some(b'$') {
            self.pos += 1;
        }
        let mut used_grouping = false;
        let int_start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_digit() {
                digits.push(b as char);
                self.pos += 1;
            } else if b == b',' && grouping && self.pos > int_start && self.is_group_comma() {
                used_grouping = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        let int_len = self.pos - int_start;
        let mut frac_len = 0;
        if self.peek() == Some(b'.') {
            let dot = self.pos;
            self.pos += 1;
            digits.push('.');
            while let Some(b) = self.peek().filter(u8::is_ascii_digit) {
                digits.push(b as char);
                self.pos += 1;
                frac_len += 1;
            }
            if frac_len == 0 {
                self.pos = dot;
                digits.pop();
            }
        }
        if int_len == 0 && frac_len == 0 {
            self.pos = start;
            return Err(self.syntax("expected number or function call"));
        }
        let mut value = BigDecimal::from_str(&digits).map_err(|e| ParseError::Syntax {
            offset: start,
            message: e.to_string(),
        })?;
        if self.peek() == Some(b'%') {
            self.pos += 1;
            value = value / BigDecimal::from(100);
        }
        Ok((ToolExpr::Number(value), used_grouping))
    }

    /// A comma followed by exactly three digits.
    fn is_group_comma(&self) -> bool {
        let rest = &self.src[self.pos + 1..];
        rest.len() >= 3
            && rest[..3].iter().all(u8::is_ascii_digit)
            && !rest.get(3).is_some_and(u8::is_ascii_digit)
    }
}
