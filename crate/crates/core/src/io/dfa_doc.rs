//! ```toml
//! accepting = ["q1"]
//! alphabet = ["0", "1"]
//! format = 1
//! initial = "q0"
//! states = ["q0", "q1"]
//!
//! [delta.q0]
//! 0 = "q0"
//! 1 = "q1"
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;

use super::{key, line_of, quote, string_list, syntax, FormatError};
use crate::reductions::Dfa;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    format: toml::Spanned<i64>,
    alphabet: Vec<String>,
    states: Vec<String>,
    initial: toml::Spanned<String>,
    #[serde(default)]
    accepting: Vec<String>,
    #[serde(default)]
    delta: BTreeMap<String, toml::Spanned<BTreeMap<String, String>>>,
}

pub fn parse_dfa(text: &str) -> Result<Dfa, FormatError> {
    let doc: Doc = toml::from_str(text).map_err(|e| syntax(text, e))?;
    if *doc.format.get_ref() != 1 {
        return Err(FormatError::Version { line: line_of(text, doc.format.span().start), found: *doc.format.get_ref() });
    }
    let state = |line: usize, s: &str| {
        doc.states.iter().position(|q| q == s).ok_or_else(|| FormatError::UnknownState { line, state: s.to_string() })
    };
    let initial = state(line_of(text, doc.initial.span().start), doc.initial.get_ref())?;
    let mut accepting = vec![false; doc.states.len()];
    for q in &doc.accepting {
        accepting[state(0, q)?] = true;
    }
    for (q, row) in &doc.delta {
        let line = line_of(text, row.span().start);
        state(line, q)?;
        for (l, to) in row.get_ref() {
            if !doc.alphabet.contains(l) {
                return Err(FormatError::UnknownLetter { line, letter: l.clone() });
            }
            state(line, to)?;
        }
    }
    let mut delta = Vec::with_capacity(doc.states.len());
    for q in &doc.states {
        let row = doc.delta.get(q);
        let line = row.map_or(0, |r| line_of(text, r.span().start));
        let mut out = Vec::with_capacity(doc.alphabet.len());
        for l in &doc.alphabet {
            let to = row
                .and_then(|r| r.get_ref().get(l))
                .ok_or_else(|| FormatError::DfaTotality { line, state: q.clone(), letter: l.clone() })?;
            out.push(state(line, to)?);
        }
        delta.push(out);
    }
    Ok(Dfa::new(doc.alphabet, doc.states, initial, delta, accepting)?)
}

pub fn serialize_dfa(d: &Dfa) -> String {
    let acc: Vec<&str> = (0..d.states.len()).filter(|&q| d.accepting[q]).map(|q| d.states[q].as_str()).collect();
    let mut out = String::new();
    out.push_str(&format!("accepting = {}\n", string_list(&acc)));
    out.push_str(&format!("alphabet = {}\n", string_list(&d.alphabet)));
    out.push_str("format = 1\n");
    out.push_str(&format!("initial = {}\n", quote(&d.states[d.initial])));
    out.push_str(&format!("states = {}\n", string_list(&d.states)));
    let mut order: Vec<usize> = (0..d.states.len()).collect();
    order.sort_by(|&x, &y| d.states[x].cmp(&d.states[y]));
    for q in order {
        out.push_str(&format!("\n[delta.{}]\n", key(&d.states[q])));
        let mut row: Vec<(&str, &str)> =
            d.alphabet.iter().enumerate().map(|(l, a)| (a.as_str(), d.states[d.delta[q][l]].as_str())).collect();
        row.sort();
        for (l, to) in row {
            out.push_str(&format!("{} = {}\n", key(l), quote(to)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::random_dfa;
    use rand::SeedableRng;

    #[test]
    fn round_trip() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let d = random_dfa(&mut rng, 4, &["0", "1"]);
            let text = serialize_dfa(&d);
            assert_eq!(parse_dfa(&text).unwrap(), d);
            assert_eq!(serialize_dfa(&parse_dfa(&text).unwrap()), text);
        }
    }

    #[test]
    fn missing_transition() {
        let text = "alphabet = [\"0\", \"1\"]\nformat = 1\ninitial = \"p\"\nstates = [\"p\"]\n\n[delta.p]\n0 = \"p\"\n";
        assert_eq!(
            parse_dfa(text).unwrap_err(),
            FormatError::DfaTotality { line: 6, state: "p".into(), letter: "1".into() }
        );
    }
}
