//! Inference of broadcast protocols from samples by constraint solving.

pub mod constraints;
pub mod export;
pub mod solver;
mod algorithms;

pub use algorithms::*;
pub use constraints::{build_constraints, ConstraintProgram, ProgramOptions};
pub use export::export_constraints;
pub use solver::{solve, SolveError, SolveOptions};

use crate::bp::{BroadcastProtocol, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Any alphabet of the form `A_S` plus padding actions.
    Plain,
    /// Actions of one similarity class share their sending state; no
    /// padding actions.
    Similarity,
}

/// A candidate protocol over states `0..k` and the sample alphabet. States
/// listed in `fresh_states` get one padding action each.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypothesis {
    pub k: usize,
    pub actions: Vec<String>,
    pub s0: StateId,
    pub f_st: Vec<StateId>,
    pub f_bang: Vec<StateId>,
    pub f_resp: Vec<Vec<StateId>>,
    pub fresh_states: Vec<StateId>,
}

/// Prefix of padding action names; extended with `_` on a clash.
pub const PAD_PREFIX: &str = "pad_";

impl Hypothesis {
    /// States are named `q0..`; each uncovered state gets a padding action
    /// that loops on it and leaves receivers in place.
    pub fn to_protocol(&self) -> BroadcastProtocol {
        let states: Vec<String> = (0..self.k).map(|s| format!("q{s}")).collect();
        let bp = BroadcastProtocol::new(
            states,
            self.s0,
            self.actions.clone(),
            self.f_st.clone(),
            self.f_bang.clone(),
            self.f_resp.clone(),
        )
        .expect("hypothesis tables are well formed");
        let padded = bp.with_padding(PAD_PREFIX);
        debug_assert_eq!(padded.num_actions() - bp.num_actions(), self.fresh_states.len());
        padded
    }
}
