//! Shared helpers for the line-oriented input formats.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A malformed input line, with its 1-based physical line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct InputError {
    pub line: usize,
    pub message: String,
}

impl InputError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        InputError { line, message: message.into() }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

/// Non-empty lines with comments stripped, paired with their line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

pub fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T, InputError> {
    tok.parse()
        .map_err(|_| InputError::new(line, format!("expected {what}, found `{tok}`")))
}

pub fn parse_nums<T: FromStr>(toks: &[&str], line: usize, what: &str) -> Result<Vec<T>, InputError> {
    toks.iter().map(|t| parse_num(t, line, what)).collect()
}
