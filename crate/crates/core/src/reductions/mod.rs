//! Constructions that turn other problems into broadcast protocols or
//! samples, and two protocol families whose shortest interesting words are
//! long.

mod dfa;
mod families;
mod intersection;
mod sat;

pub use dfa::{dfa_sample_to_bp_sample, dfa_to_bp, random_dfa, Dfa};
pub use families::{exponential_fixture_p5, family_exponential, family_quadratic, primes_up_to};
pub use intersection::{answer_bp_mq, intersection_bp};
pub use sat::{alleq3sat_to_sample, assignment_to_bp, AllEq3Cnf};

use std::collections::HashMap;

use thiserror::Error;

use crate::bp::{BroadcastProtocol, StateId};
use crate::sample::SampleError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("name {0:?} is reserved by the construction")]
    ReservedName(String),
    #[error("name {0:?} is used twice")]
    DuplicateName(String),
    #[error("invalid automaton: {0}")]
    InvalidDfa(String),
    #[error("letter {0:?} is not in the alphabet")]
    UnknownLetter(String),
    #[error("automata use different alphabets")]
    AlphabetMismatch,
    #[error("clause {0} mixes positive and negative literals")]
    MixedPolarity(usize),
    #[error("clause {clause} mentions variable {var}, but there are {vars} variables")]
    VariableOutOfRange { clause: usize, var: i64, vars: usize },
    #[error("assignment leaves clause {0} unsatisfied")]
    AssignmentDoesNotSatisfy(usize),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
}

/// How the symbols a construction adds on its own are named.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Naming {
    /// Prefixed with `__` so they cannot clash with user letters.
    #[default]
    Namespaced,
    /// Short names (`i`, `$`, `x`, `⊤`, `⊥`, ...).
    Literal,
}

impl Naming {
    pub(crate) fn name(self, namespaced: &str, literal: &str) -> String {
        match self {
            Naming::Namespaced => format!("__{namespaced}"),
            Naming::Literal => literal.to_string(),
        }
    }
}

/// Collects named states and actions; responses default to self-loops.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    states: Vec<String>,
    actions: Vec<String>,
    state_ix: HashMap<String, StateId>,
    action_ix: HashMap<String, usize>,
    sends: Vec<(StateId, StateId)>,
    responses: Vec<(usize, StateId, StateId)>,
}

impl Builder {
    pub(crate) fn state(&mut self, name: impl Into<String>) -> Result<StateId, ReductionError> {
        let name = name.into();
        if self.state_ix.contains_key(&name) {
            return Err(ReductionError::DuplicateName(name));
        }
        self.states.push(name.clone());
        self.state_ix.insert(name, self.states.len() - 1);
        Ok(self.states.len() - 1)
    }

    pub(crate) fn action(&mut self, name: impl Into<String>, from: StateId, to: StateId) -> Result<usize, ReductionError> {
        let name = name.into();
        if self.action_ix.contains_key(&name) {
            return Err(ReductionError::DuplicateName(name));
        }
        self.actions.push(name.clone());
        self.action_ix.insert(name, self.actions.len() - 1);
        self.sends.push((from, to));
        Ok(self.actions.len() - 1)
    }

    /// Later calls for the same pair win.
    pub(crate) fn respond(&mut self, a: usize, from: StateId, to: StateId) {
        self.responses.push((a, from, to));
    }

    pub(crate) fn num_states(&self) -> usize {
        self.states.len()
    }

    pub(crate) fn build(self, initial: StateId) -> BroadcastProtocol {
        let ns = self.states.len();
        let mut response: Vec<Vec<StateId>> = vec![(0..ns).collect(); self.actions.len()];
        for (a, from, to) in self.responses {
            response[a][from] = to;
        }
        BroadcastProtocol::new(
            self.states,
            initial,
            self.actions,
            self.sends.iter().map(|p| p.0).collect(),
            self.sends.iter().map(|p| p.1).collect(),
            response,
        )
        .expect("builder output is well formed")
    }
}

/// Structural equality up to the order of states and actions.
pub fn same_up_to_order(x: &BroadcastProtocol, y: &BroadcastProtocol) -> bool {
    if x.num_states() != y.num_states() || x.num_actions() != y.num_actions() {
        return false;
    }
    if x.state_name(x.initial()) != y.state_name(y.initial()) {
        return false;
    }
    let st = |s: StateId| y.state_id(x.state_name(s));
    (0..x.num_states()).all(|s| st(s).is_some())
        && (0..x.num_actions()).all(|a| {
            let Some(b) = y.action_id(x.action_name(a)) else {
                return false;
            };
            st(x.send_source(a)) == Some(y.send_source(b))
                && st(x.send_target(a)) == Some(y.send_target(b))
                && (0..x.num_states()).all(|s| st(x.response(a, s)) == Some(y.response(b, st(s).unwrap())))
        })
}
