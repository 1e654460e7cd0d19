//! Text formats: protocols and automata as TOML documents, samples as
//! tab-separated lines, formulas as DIMACS clauses, and DOT for drawing.

mod bp_doc;
mod cnf;
mod dfa_doc;
mod dot;
mod sample_tsv;

pub use bp_doc::{parse_bp, serialize_bp, BP_FORMAT_VERSION};
pub use cnf::{parse_cnf, serialize_cnf};
pub use dfa_doc::{parse_dfa, serialize_dfa};
pub use dot::bp_to_dot;
pub use sample_tsv::{parse_sample, parse_sample_raw, parse_word_list, serialize_sample};

use thiserror::Error;

use crate::bp::Diagnostic;
use crate::reductions::ReductionError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: unsupported format version {found}")]
    Version { line: usize, found: i64 },
    #[error("line {line}: unknown state `{state}`")]
    UnknownState { line: usize, state: String },
    #[error("line {line}: unknown letter `{letter}`")]
    UnknownLetter { line: usize, letter: String },
    #[error("line {line}: action `{action}` is not listed in `actions`")]
    UndeclaredAction { line: usize, action: String },
    #[error("action `{0}` is listed but has no table")]
    MissingActionTable(String),
    #[error("line {line}: action `{action}` has no send")]
    MissingSend { line: usize, action: String },
    #[error("line {line}: action `{action}` has more than one send")]
    DuplicateSend { line: usize, action: String },
    #[error("line {line}: action `{action}` has no response at state `{state}`")]
    Totality { line: usize, action: String, state: String },
    #[error("line {line}: state `{state}` has no transition on `{letter}`")]
    DfaTotality { line: usize, state: String, letter: String },
    #[error("malformed protocol: {}", join(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("lines {first} and {second} contradict each other on `{word}`")]
    Contradiction { word: String, first: usize, second: usize },
    #[error("line {line}: clause mixes positive and negative literals")]
    MixedPolarity { line: usize },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

fn join(d: &[Diagnostic]) -> String {
    d.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn syntax(text: &str, e: toml::de::Error) -> FormatError {
    let start = e.span().map_or(0, |s| s.start).min(text.len());
    let line = line_of(text, start);
    let line_start = text[..start].rfind('\n').map_or(0, |i| i + 1);
    FormatError::Syntax { line, column: text[line_start..start].chars().count() + 1, message: e.message().trim().to_string() }
}

/// TOML string literal.
fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

/// Bare key when possible, quoted otherwise.
fn key(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        s.to_string()
    } else {
        quote(s)
    }
}

fn string_list<S: AsRef<str>>(items: &[S]) -> String {
    let parts: Vec<String> = items.iter().map(|s| quote(s.as_ref())).collect();
    format!("[{}]", parts.join(", "))
}
