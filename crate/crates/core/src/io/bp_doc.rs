//! ```toml
//! actions = ["a", "b"]
//! format = 1
//! initial = "q0"
//! states = ["q0", "q1"]
//!
//! [action.a]
//! recv = { q0 = "q1", q1 = "q1" }
//! send = { from = "q0", to = "q1" }
//! ```
//!
//! `actions` and `states` fix the order of ids; every other key is written
//! sorted.

use std::collections::{BTreeMap, HashMap};

use serde::Deserialize;

use super::{key, line_of, quote, string_list, syntax, FormatError};
use crate::bp::{BroadcastProtocol, ProtocolDraft};

pub const BP_FORMAT_VERSION: i64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    format: toml::Spanned<i64>,
    states: Vec<String>,
    initial: toml::Spanned<String>,
    actions: Vec<String>,
    #[serde(default)]
    action: BTreeMap<String, toml::Spanned<ActionDoc>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionDoc {
    send: Option<Sends>,
    #[serde(default)]
    recv: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Sends {
    One(Send),
    Many(Vec<Send>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Send {
    from: String,
    to: String,
}

pub fn parse_bp(text: &str) -> Result<BroadcastProtocol, FormatError> {
    let doc: Doc = toml::from_str(text).map_err(|e| syntax(text, e))?;
    if *doc.format.get_ref() != BP_FORMAT_VERSION {
        return Err(FormatError::Version { line: line_of(text, doc.format.span().start), found: *doc.format.get_ref() });
    }
    let state_ix: HashMap<&str, usize> = doc.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let lookup = |line: usize, s: &str| {
        state_ix.get(s).copied().ok_or_else(|| FormatError::UnknownState { line, state: s.to_string() })
    };
    let initial = lookup(line_of(text, doc.initial.span().start), doc.initial.get_ref())?;
    let listed: HashMap<&str, usize> = doc.actions.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    for (name, table) in &doc.action {
        if !listed.contains_key(name.as_str()) {
            return Err(FormatError::UndeclaredAction { line: line_of(text, table.span().start), action: name.clone() });
        }
    }
    let mut draft =
        ProtocolDraft { states: doc.states.clone(), initial, actions: doc.actions.clone(), ..Default::default() };
    for (a, name) in doc.actions.iter().enumerate() {
        let table = doc.action.get(name).ok_or_else(|| FormatError::MissingActionTable(name.clone()))?;
        let line = line_of(text, table.span().start);
        let body = table.get_ref();
        let send = match &body.send {
            None => return Err(FormatError::MissingSend { line, action: name.clone() }),
            Some(Sends::One(s)) => s,
            Some(Sends::Many(v)) if v.len() == 1 => &v[0],
            Some(Sends::Many(v)) if v.is_empty() => return Err(FormatError::MissingSend { line, action: name.clone() }),
            Some(Sends::Many(_)) => return Err(FormatError::DuplicateSend { line, action: name.clone() }),
        };
        draft.sends.push((a, lookup(line, &send.from)?, lookup(line, &send.to)?));
        for (from, to) in &body.recv {
            draft.responses.push((a, lookup(line, from)?, lookup(line, to)?));
        }
        for s in &doc.states {
            if !body.recv.contains_key(s) {
                return Err(FormatError::Totality { line, action: name.clone(), state: s.clone() });
            }
        }
    }
    draft.build().map_err(FormatError::Invalid)
}

pub fn serialize_bp(bp: &BroadcastProtocol) -> String {
    let mut out = String::new();
    out.push_str(&format!("actions = {}\n", string_list(bp.action_names())));
    out.push_str(&format!("format = {BP_FORMAT_VERSION}\n"));
    out.push_str(&format!("initial = {}\n", quote(bp.state_name(bp.initial()))));
    out.push_str(&format!("states = {}\n", string_list(bp.state_names())));
    let mut order: Vec<usize> = (0..bp.num_actions()).collect();
    order.sort_by(|&x, &y| bp.action_name(x).cmp(bp.action_name(y)));
    for a in order {
        let mut recv: Vec<(&str, &str)> =
            (0..bp.num_states()).map(|s| (bp.state_name(s), bp.state_name(bp.response(a, s)))).collect();
        recv.sort();
        let recv: Vec<String> = recv.iter().map(|(f, t)| format!("{} = {}", key(f), quote(t))).collect();
        out.push_str(&format!("\n[action.{}]\n", key(bp.action_name(a))));
        out.push_str(&format!("recv = {{ {} }}\n", recv.join(", ")));
        out.push_str(&format!(
            "send = {{ from = {}, to = {} }}\n",
            quote(bp.state_name(bp.send_source(a))),
            quote(bp.state_name(bp.send_target(a)))
        ));
    }
    out
}
