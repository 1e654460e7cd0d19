use std::time::Duration;

use thiserror::Error;

use crate::bp::BroadcastProtocol;
use crate::sample::{Sample, SampleError};

use super::constraints::{EncodedSample, ProgramOptions};
use super::solver::{solve_encoded, SolveError, SolveOptions};
use super::{Hypothesis, Mode};

pub const DEFAULT_K_MAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InferOptions {
    pub k_max: usize,
    /// Upper bound on padding actions; `None` allows one per state.
    pub fresh_budget: Option<usize>,
    pub solve: SolveOptions,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { k_max: DEFAULT_K_MAX, fresh_budget: None, solve: SolveOptions::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InferError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("no consistent protocol with at most {k_max} states")]
    NoHypothesis { k_max: usize },
    #[error("time budget {budget:?} exceeded while trying {k} states")]
    Timeout { k: usize, budget: Duration },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Similarity,
    Plain,
}

#[derive(Debug, Clone)]
pub struct Inferred {
    pub protocol: BroadcastProtocol,
    pub hypothesis: Hypothesis,
    pub branch: Branch,
}

impl Inferred {
    pub fn states(&self) -> usize {
        self.hypothesis.k
    }
}

fn attempt(enc: &EncodedSample, k: usize, program: ProgramOptions, opts: &SolveOptions) -> Result<Option<Hypothesis>, InferError> {
    match solve_encoded(enc, k, program, opts) {
        Ok((h, _)) => Ok(Some(h)),
        Err(SolveError::Unsat(_)) => Ok(None),
        Err(SolveError::TimeBudgetExceeded(budget)) => Err(InferError::Timeout { k, budget }),
    }
}

fn found(h: Hypothesis, branch: Branch) -> Inferred {
    Inferred { protocol: h.to_protocol(), hypothesis: h, branch }
}

/// Smallest `k` in `1..=k_max` with a consistent hypothesis over the sample
/// alphabet plus padding actions.
pub fn infer_i(sample: &Sample, opts: &InferOptions) -> Result<Inferred, InferError> {
    let enc = EncodedSample::new(sample)?;
    for k in 1..=opts.k_max {
        let fresh = opts.fresh_budget.map_or(k, |b| b.min(k));
        if let Some(h) = attempt(&enc, k, ProgramOptions { mode: Mode::Plain, fresh }, &opts.solve)? {
            return Ok(found(h, Branch::Plain));
        }
    }
    Err(InferError::NoHypothesis { k_max: opts.k_max })
}

/// One state per similarity class, actions of a class sending from it.
pub fn infer_iprime(sample: &Sample, opts: &InferOptions) -> Result<Inferred, InferError> {
    let enc = EncodedSample::new(sample)?;
    let Some(k) = enc.num_classes() else {
        let (norm, _) = sample.normalize()?;
        return Err(norm.similarity_partition().expect_err("classes missing only on failure").into());
    };
    match attempt(&enc, k, ProgramOptions { mode: Mode::Similarity, fresh: 0 }, &opts.solve)? {
        Some(h) => Ok(found(h, Branch::Similarity)),
        None => Err(InferError::NoHypothesis { k_max: k }),
    }
}

/// The similarity route when it succeeds, otherwise the state-count search.
pub fn infer_a(sample: &Sample, opts: &InferOptions) -> Result<Inferred, InferError> {
    match infer_iprime(sample, opts) {
        Ok(r) => Ok(r),
        Err(InferError::NoHypothesis { .. }) | Err(InferError::Sample(SampleError::NotTransitive(..))) => {
            infer_i(sample, opts)
        }
        Err(e) => Err(e),
    }
}

/// Is there a consistent protocol with at most `k` states (padding actions
/// allowed, one per state)?
pub fn consistency_decision(sample: &Sample, k: usize, opts: &SolveOptions) -> Result<Option<Inferred>, InferError> {
    let enc = EncodedSample::new(sample)?;
    for kk in 1..=k {
        if let Some(h) = attempt(&enc, kk, ProgramOptions { mode: Mode::Plain, fresh: kk }, opts)? {
            return Ok(Some(found(h, Branch::Plain)));
        }
    }
    Ok(None)
}
