//! One triple per line: `word <TAB> n <TAB> T|F`, the word written as
//! space-separated action names (empty for the empty word). Blank lines
//! and lines starting with `#` are skipped.

use super::FormatError;
use crate::sample::{NormalizeReport, Sample, SampleEntry, SampleError};

/// Parses without normalizing. Entry `i` of the result came from
/// `lines[i]` (1-based).
pub fn parse_sample_raw(text: &str) -> Result<(Sample, Vec<usize>), FormatError> {
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let bad = |message: String| FormatError::Line { line, message };
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 3 {
            return Err(bad(format!("expected 3 tab-separated fields, found {}", fields.len())));
        }
        let n: u32 = fields[1].trim().parse().map_err(|_| bad(format!("`{}` is not a process count", fields[1])))?;
        if n == 0 {
            return Err(bad("process counts start at 1".into()));
        }
        let label = match fields[2].trim() {
            "T" => true,
            "F" => false,
            other => return Err(bad(format!("label must be T or F, found `{other}`"))),
        };
        entries.push(SampleEntry::parse(fields[0], n, label));
        lines.push(line);
    }
    match Sample::new(entries) {
        Ok(s) => Ok((s, lines)),
        Err(e) => Err(located(e, &lines)),
    }
}

/// Parses and normalizes; the report says what normalization dropped.
pub fn parse_sample(text: &str) -> Result<(Sample, NormalizeReport), FormatError> {
    let (raw, lines) = parse_sample_raw(text)?;
    raw.normalize().map_err(|e| located(e, &lines))
}

fn located(e: SampleError, lines: &[usize]) -> FormatError {
    match e {
        SampleError::Contradiction { word, lines: (p, q), .. } => {
            let (x, y) = (lines[p], lines[q]);
            FormatError::Contradiction { word, first: x.min(y), second: x.max(y) }
        }
        SampleError::ZeroProcesses(i) => FormatError::Line { line: lines[i], message: e.to_string() },
        other => FormatError::Line { line: 0, message: other.to_string() },
    }
}

/// Automaton words, one per line: `word <TAB> T|F`.
pub fn parse_word_list(text: &str) -> Result<Vec<(Vec<String>, bool)>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let bad = |message: String| FormatError::Line { line: i + 1, message };
        let Some((word, label)) = raw.split_once('\t') else {
            return Err(bad("expected `word <TAB> T|F`".into()));
        };
        let label = match label.trim() {
            "T" => true,
            "F" => false,
            other => return Err(bad(format!("label must be T or F, found `{other}`"))),
        };
        out.push((word.split_whitespace().map(str::to_string).collect(), label));
    }
    Ok(out)
}

pub fn serialize_sample(s: &Sample) -> String {
    s.entries()
        .iter()
        .map(|e| format!("{}\t{}\t{}\n", e.word_text(), e.n, if e.label { "T" } else { "F" }))
        .collect()
}
