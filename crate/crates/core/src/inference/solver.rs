//! Native backend: a depth-first search over partial hypotheses that
//! simulates the sample words directly and branches on whichever unknown
//! value a run needs next.
//!
//! Among all solutions it returns the lexicographically least one in the
//! order `s0, f_st, f_bang, f_resp` (actions by index, responses row-major),
//! with values that no sample run depends on set to 0.

use std::time::{Duration, Instant};

use thiserror::Error;

use super::constraints::{ConstraintProgram, EncodedSample, ProgramOptions};
use super::{Hypothesis, Mode};

const UNSET: u8 = u8::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("no hypothesis with {0} states satisfies the constraints")]
    Unsat(usize),
    #[error("time budget of {0:?} exceeded")]
    TimeBudgetExceeded(Duration),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub time_budget: Option<Duration>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
}

pub fn solve(program: &ConstraintProgram, opts: &SolveOptions) -> Result<Hypothesis, SolveError> {
    solve_with_stats(program, opts).map(|(h, _)| h)
}

pub fn solve_with_stats(
    program: &ConstraintProgram,
    opts: &SolveOptions,
) -> Result<(Hypothesis, SolveStats), SolveError> {
    solve_encoded(&program.encoded, program.k, program.options, opts)
}

/// Same search without materializing the assertions.
pub fn solve_encoded(
    enc: &EncodedSample,
    k: usize,
    program: ProgramOptions,
    opts: &SolveOptions,
) -> Result<(Hypothesis, SolveStats), SolveError> {
    let mut s = Search::new(enc, k, program.fresh, program.mode, opts);
    let h = s.run()?;
    Ok((h, SolveStats { nodes: s.nodes }))
}

#[derive(Debug, Default)]
struct Trie {
    kids: Vec<Vec<(usize, usize)>>,
    pos: Vec<bool>,
    neg: Vec<bool>,
    pos_below: Vec<bool>,
}

impl Trie {
    fn new() -> Self {
        let mut t = Trie::default();
        t.node();
        t
    }

    fn node(&mut self) -> usize {
        self.kids.push(Vec::new());
        self.pos.push(false);
        self.neg.push(false);
        self.pos_below.push(false);
        self.kids.len() - 1
    }

    fn insert(&mut self, w: &[usize], label: bool) {
        let mut cur = 0;
        if label {
            self.pos_below[0] = true;
        }
        for &a in w {
            let next = match self.kids[cur].iter().find(|(b, _)| *b == a) {
                Some(&(_, c)) => c,
                None => {
                    let c = self.node();
                    self.kids[cur].push((a, c));
                    c
                }
            };
            cur = next;
            if label {
                self.pos_below[cur] = true;
            }
        }
        if label {
            self.pos[cur] = true;
        } else {
            self.neg[cur] = true;
        }
    }

    fn sort(&mut self) {
        for k in &mut self.kids {
            k.sort_unstable();
        }
    }
}

enum Check {
    Conflict,
    Blocked(usize),
    Done,
}

struct Search<'a> {
    k: usize,
    na: usize,
    fresh: usize,
    actions: &'a [String],
    apart: &'a [Vec<bool>],
    classes: Option<&'a [usize]>,
    /// One trie of words per process count, with that count.
    tries: Vec<(u32, Trie)>,
    trivially_unsat: bool,
    vals: Vec<u8>,
    buf: Vec<u32>,
    started: Instant,
    budget: Option<Duration>,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn new(enc: &'a EncodedSample, k: usize, fresh: usize, mode: Mode, opts: &SolveOptions) -> Self {
        assert!(k < UNSET as usize, "state count too large for the native backend");
        let na = enc.actions.len();
        let mut tries: Vec<(u32, Trie)> = Vec::new();
        let mut max_depth = 0;
        let mut trivially_unsat = false;
        for e in &enc.entries {
            if e.word.is_empty() && !e.label {
                trivially_unsat = true;
            }
            max_depth = max_depth.max(e.word.len());
            let idx = match tries.iter().position(|(n, _)| *n == e.n) {
                Some(i) => i,
                None => {
                    tries.push((e.n, Trie::new()));
                    tries.len() - 1
                }
            };
            tries[idx].1.insert(&e.word, e.label);
        }
        tries.sort_by_key(|(n, _)| *n);
        for (_, t) in &mut tries {
            t.sort();
        }
        let classes = match mode {
            Mode::Similarity => match &enc.classes {
                Some(c) => Some(c.as_slice()),
                None => {
                    trivially_unsat = true;
                    None
                }
            },
            Mode::Plain => None,
        };
        let nvars = 1 + 2 * na + na * k;
        Search {
            k,
            na,
            fresh,
            actions: &enc.actions,
            apart: &enc.apart,
            classes,
            tries,
            trivially_unsat,
            vals: vec![UNSET; nvars],
            buf: vec![0; (max_depth + 2) * k.max(1)],
            started: Instant::now(),
            budget: opts.time_budget,
            nodes: 0,
        }
    }

    fn st(&self, a: usize) -> usize {
        1 + a
    }
    fn bang(&self, a: usize) -> usize {
        1 + self.na + a
    }
    fn resp(&self, a: usize, s: usize) -> usize {
        1 + 2 * self.na + a * self.k + s
    }

    fn run(&mut self) -> Result<Hypothesis, SolveError> {
        if self.trivially_unsat || self.k == 0 {
            return Err(SolveError::Unsat(self.k));
        }
        self.vals[0] = 0;
        if !self.dfs()? {
            return Err(SolveError::Unsat(self.k));
        }
        let mut best: Vec<u8> = self.vals.iter().map(|&v| if v == UNSET { 0 } else { v }).collect();
        for x in 1..best.len() {
            for v in 0..best[x] {
                self.vals[..x].copy_from_slice(&best[..x]);
                self.vals[x..].fill(UNSET);
                if !self.admissible(x, v) {
                    continue;
                }
                self.vals[x] = v;
                if self.dfs()? {
                    best = self.vals.iter().map(|&v| if v == UNSET { 0 } else { v }).collect();
                    break;
                }
            }
        }
        Ok(self.hypothesis(&best))
    }

    fn hypothesis(&self, vals: &[u8]) -> Hypothesis {
        let (k, na) = (self.k, self.na);
        let f_st: Vec<usize> = (0..na).map(|a| vals[self.st(a)] as usize).collect();
        let mut covered = vec![false; k];
        for &s in &f_st {
            covered[s] = true;
        }
        Hypothesis {
            k,
            actions: self.actions.to_vec(),
            s0: vals[0] as usize,
            f_bang: (0..na).map(|a| vals[self.bang(a)] as usize).collect(),
            f_resp: (0..na).map(|a| (0..k).map(|s| vals[self.resp(a, s)] as usize).collect()).collect(),
            f_st,
            fresh_states: (0..k).filter(|&s| !covered[s]).collect(),
        }
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if self.nodes % 256 == 0 {
            if let Some(b) = self.budget {
                if self.started.elapsed() > b {
                    return Err(SolveError::TimeBudgetExceeded(b));
                }
            }
        }
        Ok(())
    }

    fn dfs(&mut self) -> Result<bool, SolveError> {
        self.tick()?;
        let x = match self.check() {
            Check::Conflict => return Ok(false),
            Check::Done => return Ok(true),
            Check::Blocked(x) => x,
        };
        for v in self.candidates(x) {
            self.vals[x] = v;
            if self.dfs()? {
                return Ok(true);
            }
        }
        self.vals[x] = UNSET;
        Ok(false)
    }

    /// Pairwise constraints on sending states.
    fn admissible(&self, x: usize, v: u8) -> bool {
        if x == 0 || x > self.na {
            return true;
        }
        let a = x - 1;
        (0..self.na).all(|b| {
            let w = self.vals[self.st(b)];
            if b == a || w == UNSET {
                return true;
            }
            if self.apart[a][b] && w == v {
                return false;
            }
            match self.classes {
                Some(c) if c[a] == c[b] => w == v,
                _ => true,
            }
        })
    }

    /// Values already in use plus the least unused state; unused states are
    /// interchangeable, so trying one of them suffices.
    fn candidates(&self, x: usize) -> Vec<u8> {
        let k = self.k;
        let mut touched = vec![false; k];
        for (i, &v) in self.vals.iter().enumerate() {
            if v != UNSET {
                touched[v as usize] = true;
                if i > 2 * self.na {
                    touched[(i - 1 - 2 * self.na) % k] = true;
                }
            }
        }
        let mut out = Vec::with_capacity(k);
        let mut fresh_added = false;
        for (s, &t) in touched.iter().enumerate() {
            if !t {
                if fresh_added {
                    continue;
                }
                fresh_added = true;
            }
            if self.admissible(x, s as u8) {
                out.push(s as u8);
            }
        }
        out
    }

    fn check(&mut self) -> Check {
        let (k, na) = (self.k, self.na);
        let mut covered = vec![false; k];
        let mut unassigned = 0;
        let mut first_st = None;
        for a in 0..na {
            match self.vals[self.st(a)] {
                UNSET => {
                    unassigned += 1;
                    first_st.get_or_insert(self.st(a));
                }
                s => covered[s as usize] = true,
            }
        }
        let uncovered = covered.iter().filter(|c| !**c).count();
        if uncovered > unassigned + self.fresh {
            return Check::Conflict;
        }
        let mut blocked = None;
        let mut buf = std::mem::take(&mut self.buf);
        let mut ok = true;
        for (n, trie) in &self.tries {
            buf[..k].fill(0);
            buf[self.vals[0] as usize] = *n;
            if !self.walk(trie, 0, 0, &mut buf, &mut blocked) {
                ok = false;
                break;
            }
        }
        self.buf = buf;
        if !ok {
            return Check::Conflict;
        }
        match blocked.or(first_st) {
            Some(x) => Check::Blocked(x),
            None => Check::Done,
        }
    }

    /// Runs every word below `node` from the configuration stored at
    /// `buf[depth*k..]`. Returns false on a violated sample entry.
    fn walk(&self, trie: &Trie, node: usize, depth: usize, buf: &mut [u32], blocked: &mut Option<usize>) -> bool {
        let k = self.k;
        for &(a, child) in &trie.kids[node] {
            let st = self.vals[self.st(a)];
            if st == UNSET {
                blocked.get_or_insert(self.st(a));
                continue;
            }
            let st = st as usize;
            let (cur, rest) = buf.split_at_mut((depth + 1) * k);
            let conf = &cur[depth * k..];
            if conf[st] == 0 {
                if trie.pos_below[child] {
                    return false;
                }
                continue;
            }
            if trie.neg[child] {
                return false;
            }
            if trie.kids[child].is_empty() {
                continue;
            }
            let bang = self.vals[self.bang(a)];
            if bang == UNSET {
                blocked.get_or_insert(self.bang(a));
                continue;
            }
            let next = &mut rest[..k];
            next.fill(0);
            let mut known = true;
            for s in 0..k {
                let c = conf[s] - u32::from(s == st);
                if c > 0 {
                    let r = self.vals[self.resp(a, s)];
                    if r == UNSET {
                        blocked.get_or_insert(self.resp(a, s));
                        known = false;
                        break;
                    }
                    next[r as usize] += c;
                }
            }
            if !known {
                continue;
            }
            next[bang as usize] += 1;
            if !self.walk(trie, child, depth + 1, buf, blocked) {
                return false;
            }
        }
        true
    }
}
