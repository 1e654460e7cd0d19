//! Broadcast protocols and their n-process systems.
//!
//! A protocol has one sending transition per action and a total response
//! function per action. Because processes are indistinguishable, the n-process
//! system is deterministic at the level of configurations (process counts per
//! state), so every operation here works on count vectors.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::Rng;
use thiserror::Error;

pub type StateId = usize;
pub type ActionId = usize;
pub type Word = Vec<ActionId>;

/// Default cap on explored configurations for the search operations.
pub const DEFAULT_NODE_BUDGET: usize = 4_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BpError {
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("action id {0} is out of range")]
    ActionOutOfRange(ActionId),
    #[error("action `{0}` is not enabled")]
    ActionNotEnabled(String),
    #[error("configuration has {got} entries but the protocol has {expected} states")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("action alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(usize),
    #[error("malformed protocol: {0}")]
    Malformed(String),
}

/// A violated structural invariant, reported by [`ProtocolDraft::validate`]
/// and [`BroadcastProtocol::validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diagnostic {
    EmptyName,
    DuplicateStateName(String),
    DuplicateActionName(String),
    InitialOutOfRange(StateId),
    StateOutOfRange(StateId),
    ActionOutOfRange(ActionId),
    ActionWithoutSend(String),
    DuplicateSend(String),
    MissingResponse { action: String, state: String },
    DuplicateResponse { action: String, state: String },
    HiddenState(String),
}

impl Diagnostic {
    /// Hidden states are tolerated by the simulator; everything else makes
    /// the transition tables ill-defined.
    pub fn is_structural(&self) -> bool {
        !matches!(self, Diagnostic::HiddenState(_))
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::EmptyName => write!(f, "empty-name"),
            Diagnostic::DuplicateStateName(s) => write!(f, "duplicate-state {s}"),
            Diagnostic::DuplicateActionName(a) => write!(f, "duplicate-action {a}"),
            Diagnostic::InitialOutOfRange(s) => write!(f, "initial-out-of-range {s}"),
            Diagnostic::StateOutOfRange(s) => write!(f, "state-out-of-range {s}"),
            Diagnostic::ActionOutOfRange(a) => write!(f, "action-out-of-range {a}"),
            Diagnostic::ActionWithoutSend(a) => write!(f, "action-without-send {a}"),
            Diagnostic::DuplicateSend(a) => write!(f, "duplicate-send {a}"),
            Diagnostic::MissingResponse { action, state } => {
                write!(f, "missing-response {action} at {state}")
            }
            Diagnostic::DuplicateResponse { action, state } => {
                write!(f, "duplicate-response {action} at {state}")
            }
            Diagnostic::HiddenState(s) => write!(f, "hidden-state {s}"),
        }
    }
}

/// Transition lists as written by a user, before totality is checked.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProtocolDraft {
    pub states: Vec<String>,
    pub initial: StateId,
    pub actions: Vec<String>,
    /// (action, from, to)
    pub sends: Vec<(ActionId, StateId, StateId)>,
    /// (action, from, to)
    pub responses: Vec<(ActionId, StateId, StateId)>,
}

impl ProtocolDraft {
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        check_names(&self.states, &self.actions, &mut out);
        let ns = self.states.len();
        let na = self.actions.len();
        if self.initial >= ns {
            out.push(Diagnostic::InitialOutOfRange(self.initial));
        }
        let mut send_count = vec![0usize; na];
        let mut senders = vec![false; ns];
        for &(a, from, to) in &self.sends {
            if a >= na {
                out.push(Diagnostic::ActionOutOfRange(a));
                continue;
            }
            for s in [from, to] {
                if s >= ns {
                    out.push(Diagnostic::StateOutOfRange(s));
                }
            }
            send_count[a] += 1;
            if from < ns {
                senders[from] = true;
            }
        }
        let mut resp_count = vec![vec![0usize; ns]; na];
        for &(a, from, to) in &self.responses {
            if a >= na {
                out.push(Diagnostic::ActionOutOfRange(a));
                continue;
            }
            if from >= ns || to >= ns {
                out.push(Diagnostic::StateOutOfRange(from.max(to)));
                continue;
            }
            resp_count[a][from] += 1;
        }
        for a in 0..na {
            match send_count[a] {
                0 => out.push(Diagnostic::ActionWithoutSend(self.actions[a].clone())),
                1 => {}
                _ => out.push(Diagnostic::DuplicateSend(self.actions[a].clone())),
            }
            for s in 0..ns {
                let names = || (self.actions[a].clone(), self.states[s].clone());
                match resp_count[a][s] {
                    0 => {
                        let (action, state) = names();
                        out.push(Diagnostic::MissingResponse { action, state })
                    }
                    1 => {}
                    _ => {
                        let (action, state) = names();
                        out.push(Diagnostic::DuplicateResponse { action, state })
                    }
                }
            }
        }
        for s in 0..ns {
            if !senders[s] {
                out.push(Diagnostic::HiddenState(self.states[s].clone()));
            }
        }
        out
    }

    /// Builds the protocol when no structural diagnostic is present. Hidden
    /// states do not block construction.
    pub fn build(&self) -> Result<BroadcastProtocol, Vec<Diagnostic>> {
        let diags: Vec<_> = self.validate().into_iter().filter(Diagnostic::is_structural).collect();
        if !diags.is_empty() {
            return Err(diags);
        }
        let na = self.actions.len();
        let ns = self.states.len();
        let mut send_source = vec![0; na];
        let mut send_target = vec![0; na];
        for &(a, from, to) in &self.sends {
            send_source[a] = from;
            send_target[a] = to;
        }
        let mut response = vec![vec![0; ns]; na];
        for &(a, from, to) in &self.responses {
            response[a][from] = to;
        }
        Ok(BroadcastProtocol {
            states: self.states.clone(),
            initial: self.initial,
            actions: self.actions.clone(),
            send_source,
            send_target,
            response,
        })
    }
}

fn check_names(states: &[String], actions: &[String], out: &mut Vec<Diagnostic>) {
    let mut seen = HashSet::new();
    for s in states {
        if s.is_empty() {
            out.push(Diagnostic::EmptyName);
        } else if !seen.insert(s.as_str()) {
            out.push(Diagnostic::DuplicateStateName(s.clone()));
        }
    }
    let mut seen = HashSet::new();
    for a in actions {
        if a.is_empty() {
            out.push(Diagnostic::EmptyName);
        } else if !seen.insert(a.as_str()) {
            out.push(Diagnostic::DuplicateActionName(a.clone()));
        }
    }
}

/// A broadcast protocol with total sending and response tables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BroadcastProtocol {
    states: Vec<String>,
    initial: StateId,
    actions: Vec<String>,
    send_source: Vec<StateId>,
    send_target: Vec<StateId>,
    /// response[a][s]
    response: Vec<Vec<StateId>>,
}

impl BroadcastProtocol {
    pub fn new(
        states: Vec<String>,
        initial: StateId,
        actions: Vec<String>,
        send_source: Vec<StateId>,
        send_target: Vec<StateId>,
        response: Vec<Vec<StateId>>,
    ) -> Result<Self, BpError> {
        let ns = states.len();
        let na = actions.len();
        let bad = |m: String| Err(BpError::Malformed(m));
        if ns == 0 {
            return bad("no states".into());
        }
        if initial >= ns {
            return bad(format!("initial state {initial} out of range"));
        }
        if send_source.len() != na || send_target.len() != na || response.len() != na {
            return bad("transition tables do not match the action count".into());
        }
        if send_source.iter().chain(&send_target).any(|&s| s >= ns) {
            return bad("sending transition refers to an unknown state".into());
        }
        for row in &response {
            if row.len() != ns || row.iter().any(|&s| s >= ns) {
                return bad("response table is not a total function on states".into());
            }
        }
        let mut diags = Vec::new();
        check_names(&states, &actions, &mut diags);
        if let Some(d) = diags.first() {
            return bad(d.to_string());
        }
        Ok(BroadcastProtocol { states, initial, actions, send_source, send_target, response })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }
    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }
    pub fn initial(&self) -> StateId {
        self.initial
    }
    pub fn state_names(&self) -> &[String] {
        &self.states
    }
    pub fn action_names(&self) -> &[String] {
        &self.actions
    }
    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }
    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a]
    }
    pub fn send_source(&self, a: ActionId) -> StateId {
        self.send_source[a]
    }
    pub fn send_target(&self, a: ActionId) -> StateId {
        self.send_target[a]
    }
    pub fn response(&self, a: ActionId, s: StateId) -> StateId {
        self.response[a][s]
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name)
    }
    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    /// Converts back to transition lists (used by serializers and tests that
    /// construct broken variants).
    pub fn to_draft(&self) -> ProtocolDraft {
        let mut sends = Vec::new();
        let mut responses = Vec::new();
        for a in 0..self.num_actions() {
            sends.push((a, self.send_source[a], self.send_target[a]));
            for s in 0..self.num_states() {
                responses.push((a, s, self.response[a][s]));
            }
        }
        ProtocolDraft {
            states: self.states.clone(),
            initial: self.initial,
            actions: self.actions.clone(),
            sends,
            responses,
        }
    }

    /// Reports hidden states and naming problems. Totality holds by
    /// construction for this type.
    pub fn validate(&self) -> Vec<Diagnostic> {
        self.to_draft().validate()
    }

    pub fn hidden_states(&self) -> Vec<StateId> {
        let mut lit = vec![false; self.num_states()];
        for &s in &self.send_source {
            lit[s] = true;
        }
        (0..self.num_states()).filter(|&s| !lit[s]).collect()
    }

    /// Returns a copy with an extra self-looping action on every hidden state.
    /// The new actions respond with the identity everywhere, so they never
    /// move a receiving process.
    pub fn with_padding(&self, prefix: &str) -> BroadcastProtocol {
        let mut bp = self.clone();
        for s in self.hidden_states() {
            let mut name = format!("{prefix}{}", self.states[s]);
            while bp.action_id(&name).is_some() {
                name.push('_');
            }
            bp.actions.push(name);
            bp.send_source.push(s);
            bp.send_target.push(s);
            bp.response.push((0..self.num_states()).collect());
        }
        bp
    }

    /// Parses a whitespace-separated word of action names.
    pub fn parse_word(&self, text: &str) -> Result<Word, BpError> {
        text.split_whitespace()
            .map(|t| self.action_id(t).ok_or_else(|| BpError::UnknownAction(t.to_string())))
            .collect()
    }

    pub fn word_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Word, BpError> {
        names
            .iter()
            .map(|t| {
                let t = t.as_ref();
                self.action_id(t).ok_or_else(|| BpError::UnknownAction(t.to_string()))
            })
            .collect()
    }

    pub fn format_word(&self, w: &[ActionId]) -> String {
        w.iter().map(|&a| self.actions[a].as_str()).collect::<Vec<_>>().join(" ")
    }

    /// The response of `a` as a 0/1 matrix with `m[t][s] = 1` iff `a??` maps
    /// `s` to `t`. Only used for inspection.
    pub fn response_matrix(&self, a: ActionId) -> Vec<Vec<u8>> {
        let k = self.num_states();
        let mut m = vec![vec![0u8; k]; k];
        for s in 0..k {
            m[self.response[a][s]][s] = 1;
        }
        m
    }

    /// Human-readable dump of the algebraic form: `v_a`, `v_a'` and `M_a`.
    pub fn matrix_form(&self) -> String {
        let k = self.num_states();
        let unit = |s: StateId| {
            (0..k).map(|i| if i == s { "1" } else { "0" }).collect::<Vec<_>>().join(" ")
        };
        let mut out = String::new();
        for a in 0..self.num_actions() {
            out.push_str(&format!("action {}\n", self.actions[a]));
            out.push_str(&format!("  v  = [{}]\n", unit(self.send_source[a])));
            out.push_str(&format!("  v' = [{}]\n", unit(self.send_target[a])));
            for row in self.response_matrix(a) {
                let row: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("  M  | {} |\n", row.join(" ")));
            }
        }
        out
    }

    fn check_config(&self, c: &Configuration) -> Result<(), BpError> {
        if c.counts.len() != self.num_states() {
            return Err(BpError::DimensionMismatch {
                expected: self.num_states(),
                got: c.counts.len(),
            });
        }
        Ok(())
    }

    fn check_action(&self, a: ActionId) -> Result<(), BpError> {
        if a >= self.num_actions() {
            return Err(BpError::ActionOutOfRange(a));
        }
        Ok(())
    }

    pub fn initial_configuration(&self, n: u32) -> Configuration {
        let mut counts = vec![0; self.num_states()];
        counts[self.initial] = n;
        Configuration { counts }
    }

    pub fn enabled_actions(&self, c: &Configuration) -> Result<BTreeSet<ActionId>, BpError> {
        self.check_config(c)?;
        Ok((0..self.num_actions()).filter(|&a| c.counts[self.send_source[a]] > 0).collect())
    }

    pub fn is_enabled(&self, counts: &[u32], a: ActionId) -> bool {
        counts[self.send_source[a]] > 0
    }

    /// In-place successor on raw counts. Returns false (leaving `out`
    /// unspecified) when `a` is not enabled.
    pub fn step_into(&self, counts: &[u32], a: ActionId, out: &mut Vec<u32>) -> bool {
        let src = self.send_source[a];
        if counts[src] == 0 {
            return false;
        }
        out.clear();
        out.resize(counts.len(), 0);
        let row = &self.response[a];
        for (s, &cnt) in counts.iter().enumerate() {
            let cnt = if s == src { cnt - 1 } else { cnt };
            if cnt > 0 {
                out[row[s]] += cnt;
            }
        }
        out[self.send_target[a]] += 1;
        true
    }

    /// `q' = M_a (q - v_a) + v_a'`.
    pub fn step(&self, c: &Configuration, a: ActionId) -> Result<Configuration, BpError> {
        self.check_config(c)?;
        self.check_action(a)?;
        let mut out = Vec::new();
        if !self.step_into(&c.counts, a, &mut out) {
            return Err(BpError::ActionNotEnabled(self.actions[a].clone()));
        }
        Ok(Configuration { counts: out })
    }

    pub fn run(&self, n: u32, w: &[ActionId]) -> Result<RunOutcome, BpError> {
        for &a in w {
            self.check_action(a)?;
        }
        let mut cur = self.initial_configuration(n).counts;
        let mut next = Vec::with_capacity(cur.len());
        for (i, &a) in w.iter().enumerate() {
            if !self.step_into(&cur, a, &mut next) {
                return Ok(RunOutcome::Blocked { index: i, before: Configuration { counts: cur } });
            }
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(RunOutcome::Completed(Configuration { counts: cur }))
    }

    pub fn run_named(&self, n: u32, w: &str) -> Result<RunOutcome, BpError> {
        let w = self.parse_word(w)?;
        self.run(n, &w)
    }

    pub fn feasible(&self, n: u32, w: &[ActionId]) -> Result<bool, BpError> {
        Ok(self.run(n, w)?.is_feasible())
    }

    /// Fast path for callers that already checked the word.
    pub(crate) fn feasible_unchecked(&self, n: u32, w: &[ActionId]) -> bool {
        let mut cur = self.initial_configuration(n).counts;
        let mut next = Vec::with_capacity(cur.len());
        for &a in w {
            if !self.step_into(&cur, a, &mut next) {
                return false;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        true
    }

    /// All feasible words of length at most `max_len` in the `n`-process
    /// system. `budget` caps the number of words produced.
    pub fn enumerate_language(
        &self,
        n: u32,
        max_len: usize,
        budget: usize,
    ) -> Result<BTreeSet<Word>, BpError> {
        let mut succ: HashMap<Vec<u32>, Vec<(ActionId, Vec<u32>)>> = HashMap::new();
        let mut out = BTreeSet::new();
        let mut word = Vec::new();
        let start = self.initial_configuration(n).counts;
        self.enumerate_rec(&start, max_len, budget, &mut succ, &mut word, &mut out)?;
        Ok(out)
    }

    fn enumerate_rec(
        &self,
        c: &[u32],
        left: usize,
        budget: usize,
        succ: &mut HashMap<Vec<u32>, Vec<(ActionId, Vec<u32>)>>,
        word: &mut Word,
        out: &mut BTreeSet<Word>,
    ) -> Result<(), BpError> {
        if out.len() >= budget {
            return Err(BpError::BudgetExceeded(budget));
        }
        out.insert(word.clone());
        if left == 0 {
            return Ok(());
        }
        if !succ.contains_key(c) {
            let mut list = Vec::new();
            let mut next = Vec::new();
            for a in 0..self.num_actions() {
                if self.step_into(c, a, &mut next) {
                    list.push((a, next.clone()));
                }
            }
            succ.insert(c.to_vec(), list);
        }
        let list = succ[c].clone();
        for (a, next) in list {
            word.push(a);
            self.enumerate_rec(&next, left - 1, budget, succ, word, out)?;
            word.pop();
        }
        Ok(())
    }

    /// Decides `L(self^n) = L(other^n)`; actions are matched by name.
    pub fn lang_equal_at(
        &self,
        other: &BroadcastProtocol,
        n: u32,
        budget: usize,
    ) -> Result<LangComparison, BpError> {
        let map = self.action_map_to(other)?;
        sync_bfs(
            self,
            self.initial_configuration(n).counts,
            other,
            other.initial_configuration(n).counts,
            &map,
            budget,
        )
    }

    fn action_map_to(&self, other: &BroadcastProtocol) -> Result<Vec<ActionId>, BpError> {
        if self.num_actions() != other.num_actions() {
            return Err(BpError::AlphabetMismatch(format!(
                "{} actions vs {}",
                self.num_actions(),
                other.num_actions()
            )));
        }
        self.actions
            .iter()
            .map(|a| other.action_id(a).ok_or_else(|| BpError::AlphabetMismatch(a.clone())))
            .collect()
    }

    /// Smallest `k <= k_max` with `L(B^k) = L(B^{k+1})`.
    pub fn detect_cutoff(&self, k_max: u32, budget: usize) -> Result<Option<u32>, BpError> {
        let id: Vec<ActionId> = (0..self.num_actions()).collect();
        for k in 1..=k_max {
            let cmp = sync_bfs(
                self,
                self.initial_configuration(k).counts,
                self,
                self.initial_configuration(k + 1).counts,
                &id,
                budget,
            )?;
            if cmp.is_equal() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Least `n` in `1..=n_max` for which `w` is feasible. Feasibility is
    /// monotone in `n`, so a binary search suffices.
    pub fn min_processes(&self, w: &[ActionId], n_max: u32) -> Result<Option<u32>, BpError> {
        for &a in w {
            self.check_action(a)?;
        }
        if n_max == 0 || !self.feasible_unchecked(n_max, w) {
            return Ok(None);
        }
        let (mut lo, mut hi) = (1u32, n_max);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.feasible_unchecked(mid, w) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Some(lo))
    }

    /// A shortest feasible word of the `n`-process system that ends with `a`.
    pub fn shortest_word_with_action(
        &self,
        a: ActionId,
        n: u32,
        len_budget: usize,
        node_budget: usize,
    ) -> Result<Option<Word>, BpError> {
        self.check_action(a)?;
        let mut found = None;
        bfs_configurations(self, n, len_budget.saturating_sub(1), node_budget, |counts, path| {
            if self.is_enabled(counts, a) {
                let mut w = path();
                w.push(a);
                found = Some(w);
                true
            } else {
                false
            }
        })?;
        Ok(found)
    }

    /// Least `n <= n_max` for which some feasible word contains `a`.
    pub fn min_processes_for_action(
        &self,
        a: ActionId,
        n_max: u32,
        node_budget: usize,
    ) -> Result<Option<(u32, Word)>, BpError> {
        for n in 1..=n_max {
            if let Some(w) = self.shortest_word_with_action(a, n, usize::MAX, node_budget)? {
                return Ok(Some((n, w)));
            }
        }
        Ok(None)
    }

    /// Every configuration reachable in the `n`-process system together with
    /// a shortest word reaching it.
    pub fn reachable_configurations(
        &self,
        n: u32,
        node_budget: usize,
    ) -> Result<Vec<(Configuration, Word)>, BpError> {
        let mut out = Vec::new();
        bfs_configurations(self, n, usize::MAX, node_budget, |counts, path| {
            out.push((Configuration { counts: counts.to_vec() }, path()));
            false
        })?;
        Ok(out)
    }
}

/// Breadth-first search over reachable configurations. `visit` receives each
/// configuration (in BFS order) and a closure producing its shortest word;
/// returning true stops the search.
fn bfs_configurations<F>(
    bp: &BroadcastProtocol,
    n: u32,
    max_depth: usize,
    node_budget: usize,
    mut visit: F,
) -> Result<(), BpError>
where
    F: FnMut(&[u32], &dyn Fn() -> Word) -> bool,
{
    let start: Box<[u32]> = bp.initial_configuration(n).counts.into_boxed_slice();
    let mut index: HashMap<Box<[u32]>, usize> = HashMap::new();
    let mut nodes: Vec<(Box<[u32]>, usize, ActionId, usize)> = Vec::new(); // counts, parent, action, depth
    index.insert(start.clone(), 0);
    nodes.push((start, usize::MAX, 0, 0));
    let mut head = 0;
    let mut next = Vec::new();
    while head < nodes.len() {
        let (counts, depth) = (nodes[head].0.clone(), nodes[head].3);
        let path = || {
            let mut w = Vec::new();
            let mut i = head;
            while nodes[i].1 != usize::MAX {
                w.push(nodes[i].2);
                i = nodes[i].1;
            }
            w.reverse();
            w
        };
        if visit(&counts, &path) {
            return Ok(());
        }
        if depth < max_depth {
            for a in 0..bp.num_actions() {
                if bp.step_into(&counts, a, &mut next) {
                    let key: Box<[u32]> = next.clone().into_boxed_slice();
                    if !index.contains_key(&key) {
                        if nodes.len() >= node_budget {
                            return Err(BpError::BudgetExceeded(node_budget));
                        }
                        index.insert(key.clone(), nodes.len());
                        nodes.push((key, head, a, depth + 1));
                    }
                }
            }
        }
        head += 1;
    }
    Ok(())
}

/// Outcome of a fixed-n language comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LangComparison {
    Equal,
    /// A shortest word feasible in exactly one of the two systems.
    Distinguished(Word),
}

impl LangComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, LangComparison::Equal)
    }
    pub fn counterexample(&self) -> Option<&Word> {
        match self {
            LangComparison::Equal => None,
            LangComparison::Distinguished(w) => Some(w),
        }
    }
}

/// Synchronized BFS over configuration pairs; `map[a]` is the id in `bp2` of
/// action `a` of `bp1`. Counterexamples are in `bp1`'s action ids.
fn sync_bfs(
    bp1: &BroadcastProtocol,
    c1: Vec<u32>,
    bp2: &BroadcastProtocol,
    c2: Vec<u32>,
    map: &[ActionId],
    budget: usize,
) -> Result<LangComparison, BpError> {
    type Pair = (Box<[u32]>, Box<[u32]>);
    let mut seen: HashSet<Pair> = HashSet::new();
    let mut nodes: Vec<(Pair, usize, ActionId)> = Vec::new();
    let start: Pair = (c1.into_boxed_slice(), c2.into_boxed_slice());
    seen.insert(start.clone());
    nodes.push((start, usize::MAX, 0));
    let mut head = 0;
    let (mut n1, mut n2) = (Vec::new(), Vec::new());
    while head < nodes.len() {
        let (x, y) = nodes[head].0.clone();
        for a in 0..bp1.num_actions() {
            let e1 = bp1.step_into(&x, a, &mut n1);
            let e2 = bp2.step_into(&y, map[a], &mut n2);
            if e1 != e2 {
                let mut w = vec![a];
                let mut i = head;
                while nodes[i].1 != usize::MAX {
                    w.push(nodes[i].2);
                    i = nodes[i].1;
                }
                w.reverse();
                return Ok(LangComparison::Distinguished(w));
            }
            if e1 {
                let key: Pair = (n1.clone().into_boxed_slice(), n2.clone().into_boxed_slice());
                if !seen.contains(&key) {
                    if nodes.len() >= budget {
                        return Err(BpError::BudgetExceeded(budget));
                    }
                    seen.insert(key.clone());
                    nodes.push((key, head, a));
                }
            }
        }
        head += 1;
    }
    Ok(LangComparison::Equal)
}

/// Process counts per state for a fixed number of processes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    counts: Vec<u32>,
}

impl Configuration {
    pub fn new(counts: Vec<u32>) -> Self {
        Configuration { counts }
    }
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }
    pub fn n(&self) -> u32 {
        self.counts.iter().sum()
    }
    pub fn is_lit(&self, s: StateId) -> bool {
        self.counts[s] > 0
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Completed(Configuration),
    /// `index` is the position of the first action that was not enabled;
    /// `before` is the configuration reached by the preceding prefix.
    Blocked { index: usize, before: Configuration },
}

impl RunOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, RunOutcome::Completed(_))
    }
    pub fn final_configuration(&self) -> Option<&Configuration> {
        match self {
            RunOutcome::Completed(c) => Some(c),
            RunOutcome::Blocked { .. } => None,
        }
    }
}

fn letter_name(i: usize) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    if i < LETTERS.len() {
        (LETTERS[i] as char).to_string()
    } else {
        format!("a{i}")
    }
}

/// Uniformly random protocol without hidden states: the first `states`
/// actions send from distinct states, the rest from random ones.
pub fn random_protocol<R: Rng + ?Sized>(rng: &mut R, states: usize, actions: usize) -> BroadcastProtocol {
    assert!(states >= 1 && actions >= states, "need at least one action per state");
    let mut send_source: Vec<StateId> = (0..states).collect();
    for _ in states..actions {
        send_source.push(rng.gen_range(0..states));
    }
    // shuffle so that action names do not reveal the layout
    for i in (1..actions).rev() {
        let j = rng.gen_range(0..=i);
        send_source.swap(i, j);
    }
    let send_target = (0..actions).map(|_| rng.gen_range(0..states)).collect();
    let response = (0..actions)
        .map(|_| (0..states).map(|_| rng.gen_range(0..states)).collect())
        .collect();
    BroadcastProtocol {
        states: (0..states).map(|s| format!("s{s}")).collect(),
        initial: 0,
        actions: (0..actions).map(letter_name).collect(),
        send_source,
        send_target,
        response,
    }
}

/// Fixed protocols used throughout the tests and the CLI demos.
pub mod examples {
    use super::*;

    fn build(
        states: &[&str],
        actions: &[&str],
        sends: &[(usize, usize)],
        response: &[&[usize]],
    ) -> BroadcastProtocol {
        BroadcastProtocol::new(
            states.iter().map(|s| s.to_string()).collect(),
            0,
            actions.iter().map(|s| s.to_string()).collect(),
            sends.iter().map(|p| p.0).collect(),
            sends.iter().map(|p| p.1).collect(),
            response.iter().map(|r| r.to_vec()).collect(),
        )
        .expect("fixture is well formed")
    }

    /// Two states; `a` sends from s0 to s1 and resets receivers to s0, `b`
    /// loops on s1 and pulls receivers to s1.
    pub fn reset_pull() -> BroadcastProtocol {
        build(&["s0", "s1"], &["a", "b"], &[(0, 1), (1, 1)], &[&[0, 0], &[1, 1]])
    }

    /// `a` loops on s0 and pushes receivers to s1; `b` sends from s1 back to
    /// s0 and pushes receivers to s1.
    pub fn b1() -> BroadcastProtocol {
        build(&["s0", "s1"], &["a", "b"], &[(0, 0), (1, 0)], &[&[1, 1], &[1, 1]])
    }

    /// Same language as [`b1`] but not isomorphic to it.
    pub fn b2() -> BroadcastProtocol {
        build(&["s0", "s1"], &["a", "b"], &[(0, 0), (1, 1)], &[&[1, 1], &[0, 1]])
    }

    /// One state, one self-looping action.
    pub fn single_loop() -> BroadcastProtocol {
        build(&["s0"], &["a"], &[(0, 0)], &[&[0]])
    }
}
