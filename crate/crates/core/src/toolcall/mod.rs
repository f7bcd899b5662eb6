//! The structured arithmetic programs a model emits for offloaded calculation:
//!
//! ```text
//! Expr := Number | Fn '(' Expr ',' Expr ')'
//! Fn   := Add | Subtract | Multiply | Divide
//! ```
//!
//! Numbers may carry a leading sign, a `$`, thousands commas and a trailing
//! `%` (which divides by 100). Evaluation uses exact decimal arithmetic.

mod eval;
mod extract;
mod parse;

use std::fmt;

use bigdecimal::BigDecimal;

pub use eval::{eval_program, EvalError};
pub use extract::{extract_program, extract_program_with};
pub use parse::{parse_program, parse_program_with, ParseError, ParseOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Function {
    Add,
    Subtract,
    Multiply,
    Divide,
}

impl Function {
    pub const ALL: [Function; 4] = [
        Function::Add,
        Function::Subtract,
        Function::Multiply,
        Function::Divide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Add => "Add",
            Function::Subtract => "Subtract",
            Function::Multiply => "Multiply",
            Function::Divide => "Divide",
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ToolExpr {
    Number(BigDecimal),
    Call(Function, Box<ToolExpr>, Box<ToolExpr>),
}

impl ToolExpr {
    pub fn call(func: Function, a: ToolExpr, b: ToolExpr) -> Self {
        ToolExpr::Call(func, Box::new(a), Box::new(b))
    }

    pub fn num(v: impl Into<BigDecimal>) -> Self {
        ToolExpr::Number(v.into())
    }

    pub fn depth(&self) -> usize {
        match self {
            ToolExpr::Number(_) => 0,
            ToolExpr::Call(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn contains(&self, func: Function) -> bool {
        match self {
            ToolExpr::Number(_) => false,
            ToolExpr::Call(f, a, b) => *f == func || a.contains(func) || b.contains(func),
        }
    }
}

/// Canonical form: `Fn(a, b)`, numbers in plain (non-exponent) notation.
pub fn render_program(expr: &ToolExpr) -> String {
    expr.to_string()
}

impl fmt::Display for ToolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToolExpr::Number(n) => f.write_str(&format_decimal(n)),
            ToolExpr::Call(func, a, b) => write!(f, "{}({a}, {b})", func.name()),
        }
    }
}

/// Plain decimal notation without trailing fractional zeros.
pub fn format_decimal(n: &BigDecimal) -> String {
    n.normalized().to_plain_string()
}
