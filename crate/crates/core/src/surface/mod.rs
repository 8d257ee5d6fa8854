//! Surface language: lexing, parsing and elaboration into kernel terms.

pub mod elab;
pub mod lexer;
pub mod parser;

use std::fmt;

use crate::checker::KernelError;

pub use elab::{Elaborator, Global};

/// Byte range in a source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }

    /// 1-based line and column of the start.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        let upto = &src[..self.start.min(src.len())];
        let line = upto.matches('\n').count() + 1;
        let col = upto
            .rsplit('\n')
            .next()
            .map(|l| l.chars().count())
            .unwrap_or(0)
            + 1;
        (line, col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct ElabError {
    pub code: &'static str,
    pub message: String,
    pub span: Span,
}

impl ElabError {
    pub fn new(code: &'static str, span: Span, message: impl Into<String>) -> Self {
        ElabError {
            code,
            message: message.into(),
            span,
        }
    }

    pub fn parse(span: Span, message: &str) -> Self {
        ElabError::new("parse-error", span, message)
    }

    pub fn kernel(span: Span, e: KernelError) -> Self {
        ElabError {
            code: e.code(),
            message: e.to_string(),
            span,
        }
    }

    /// `file:line:col: error[code]: message`
    pub fn render(&self, file: &str, src: &str) -> String {
        let (l, c) = self.span.line_col(src);
        format!("{file}:{l}:{c}: error[{}]: {}", self.code, self.message)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}
