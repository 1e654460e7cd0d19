//! The constraint program over `s0`, `f_st`, `f_bang`, `f_resp` and the
//! per-word process-position variables `p[j][l]`.

use crate::bp::Word;
use crate::sample::{Sample, SampleError};

use super::{Hypothesis, Mode};

/// Sample data in the form both backends consume: words over the alphabet
/// ids, one entry per word and label (the extreme process count).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedSample {
    pub actions: Vec<String>,
    pub entries: Vec<EncodedEntry>,
    pub apart: Vec<Vec<bool>>,
    /// Class index per action when the similarity relation is an
    /// equivalence.
    pub classes: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedEntry {
    /// Index into the normalized sample.
    pub source: usize,
    pub word: Word,
    pub n: u32,
    pub label: bool,
}

impl EncodedSample {
    /// Negative words that use an action outside the alphabet are satisfied
    /// by every candidate (the action is never enabled) and are dropped.
    pub fn new(sample: &Sample) -> Result<Self, SampleError> {
        let (norm, _) = sample.normalize()?;
        let actions = norm.alphabet();
        let id = |a: &str| actions.iter().position(|x| x == a);
        let mut entries = Vec::new();
        for (i, e) in norm.entries().iter().enumerate() {
            let word: Option<Word> = e.word.iter().map(|a| id(a)).collect();
            if let Some(word) = word {
                entries.push(EncodedEntry { source: i, word, n: e.n, label: e.label });
            }
        }
        let apart = norm.apartness();
        let classes = norm.similarity_partition().ok().map(|cls| {
            let mut of = vec![0; actions.len()];
            for (c, members) in cls.iter().enumerate() {
                for m in members {
                    of[id(m).expect("class member in alphabet")] = c;
                }
            }
            of
        });
        Ok(EncodedSample { actions, entries, apart, classes })
    }

    pub fn num_classes(&self) -> Option<usize> {
        self.classes.as_ref().map(|c| c.iter().max().map_or(0, |m| m + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Init,
    State(usize),
    St(usize),
    Bang(usize),
    Resp(usize, Box<Term>),
    Var(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Ne(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

/// Which group of constraints an assertion belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Apart actions are sent from different states (and, in similarity
    /// mode, similar actions from the same state).
    Separation = 1,
    /// Every state has a sending transition.
    NoHiddenStates = 2,
    /// First letters of feasible words are sent from the initial state; a
    /// single infeasible letter is not.
    FirstLetter = 3,
    /// Run of a word with one process.
    SingleProcess = 4,
    /// Run of a word with several processes.
    MultiProcess = 5,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assertion {
    pub family: Family,
    /// Normalized-sample entry that produced the assertion.
    pub entry: Option<usize>,
    pub note: String,
    pub formula: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProgramOptions {
    pub mode: Mode,
    /// Number of padding action symbols declared besides the alphabet.
    pub fresh: usize,
}

impl Default for ProgramOptions {
    fn default() -> Self {
        ProgramOptions { mode: Mode::Plain, fresh: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintProgram {
    pub k: usize,
    pub options: ProgramOptions,
    pub encoded: EncodedSample,
    /// Alphabet followed by the padding symbols.
    pub action_symbols: Vec<String>,
    pub var_names: Vec<String>,
    pub assertions: Vec<Assertion>,
}

impl ConstraintProgram {
    pub fn count_by_family(&self, f: Family) -> usize {
        self.assertions.iter().filter(|a| a.family == f).count()
    }
}

pub fn build_constraints(
    sample: &Sample,
    k: usize,
    options: ProgramOptions,
) -> Result<ConstraintProgram, SampleError> {
    let encoded = EncodedSample::new(sample)?;
    Ok(build_from_encoded(encoded, k, options))
}

pub fn build_from_encoded(encoded: EncodedSample, k: usize, options: ProgramOptions) -> ConstraintProgram {
    let na = encoded.actions.len();
    let mut action_symbols = encoded.actions.clone();
    for j in 0..options.fresh {
        action_symbols.push(format!("pad{j}"));
    }
    let mut b = Builder { var_names: Vec::new(), assertions: Vec::new() };
    let name = |a: usize| encoded.actions[a].clone();

    for a in 0..na {
        for c in a + 1..na {
            if encoded.apart[a][c] {
                b.push(Family::Separation, None, format!("{} apart {}", name(a), name(c)),
                    Formula::Ne(Term::St(a), Term::St(c)));
            } else if options.mode == Mode::Similarity {
                b.push(Family::Separation, None, format!("{} similar {}", name(a), name(c)),
                    Formula::Eq(Term::St(a), Term::St(c)));
            }
        }
    }

    for s in 0..k {
        let alts = (0..action_symbols.len()).map(|a| Formula::Eq(Term::St(a), Term::State(s))).collect();
        b.push(Family::NoHiddenStates, None, format!("state {s} sends"), Formula::Or(alts));
    }

    let mut first_pos = vec![false; na];
    let mut single_neg = vec![false; na];
    for e in &encoded.entries {
        match (e.label, e.word.as_slice()) {
            (true, [a, ..]) => first_pos[*a] = true,
            (false, [a]) => single_neg[*a] = true,
            _ => {}
        }
    }
    for a in 0..na {
        if first_pos[a] {
            b.push(Family::FirstLetter, None, format!("{} starts a feasible word", name(a)),
                Formula::Eq(Term::St(a), Term::Init));
        }
        if single_neg[a] {
            b.push(Family::FirstLetter, None, format!("{} is infeasible initially", name(a)),
                Formula::Ne(Term::St(a), Term::Init));
        }
    }

    for e in &encoded.entries {
        let family = if e.n == 1 { Family::SingleProcess } else { Family::MultiProcess };
        let text: Vec<&str> = e.word.iter().map(|&a| encoded.actions[a].as_str()).collect();
        let note = format!("({}, {}, {})", text.join(" "), e.n, if e.label { "T" } else { "F" });
        let n = e.n as usize;
        let m = e.word.len();
        let tag = b.assertions.len();
        let steps = if e.label { m } else { m.saturating_sub(1) };
        let p = b.vars(tag, n, steps + 1);
        let formula = if e.label {
            run_formula(&p, &e.word)
        } else {
            let mut alts = Vec::new();
            for l in 0..m {
                let mut parts = vec![run_formula(&p, &e.word[..l])];
                for row in &p {
                    parts.push(Formula::Ne(Term::Var(row[l]), Term::St(e.word[l])));
                }
                alts.push(Formula::And(parts));
            }
            // the empty word is always feasible
            Formula::Or(alts)
        };
        b.push(family, Some(e.source), note, formula);
    }

    ConstraintProgram {
        k,
        options,
        encoded,
        action_symbols,
        var_names: b.var_names,
        assertions: b.assertions,
    }
}

struct Builder {
    var_names: Vec<String>,
    assertions: Vec<Assertion>,
}

impl Builder {
    fn push(&mut self, family: Family, entry: Option<usize>, note: String, formula: Formula) {
        self.assertions.push(Assertion { family, entry, note, formula });
    }

    /// Fresh variables `p[j][l]` for one assertion.
    fn vars(&mut self, tag: usize, n: usize, len: usize) -> Vec<Vec<usize>> {
        (0..n)
            .map(|j| {
                (0..len)
                    .map(|l| {
                        self.var_names.push(format!("p_{tag}_{j}_{l}"));
                        self.var_names.len() - 1
                    })
                    .collect()
            })
            .collect()
    }
}

/// `p[j][0] = s0` for all `j`, and for every letter some process `j` sends
/// it while every other process takes its response.
fn run_formula(p: &[Vec<usize>], w: &[usize]) -> Formula {
    let n = p.len();
    let mut parts: Vec<Formula> = p.iter().map(|row| Formula::Eq(Term::Var(row[0]), Term::Init)).collect();
    for (l, &a) in w.iter().enumerate() {
        let l = l + 1;
        let mut alts = Vec::new();
        for j in 0..n {
            let mut conj = vec![
                Formula::Eq(Term::Var(p[j][l - 1]), Term::St(a)),
                Formula::Eq(Term::Var(p[j][l]), Term::Bang(a)),
            ];
            for (jj, row) in p.iter().enumerate() {
                if jj != j {
                    conj.push(Formula::Eq(
                        Term::Var(row[l]),
                        Term::Resp(a, Box::new(Term::Var(row[l - 1]))),
                    ));
                }
            }
            alts.push(Formula::And(conj));
        }
        parts.push(Formula::Or(alts));
    }
    Formula::And(parts)
}

/// Values for every symbol of a program, including padding symbols.
struct Model<'a> {
    h: &'a Hypothesis,
    fresh_st: Vec<usize>,
}

impl Model<'_> {
    fn eval(&self, t: &Term, env: &[Option<usize>]) -> Option<usize> {
        let na = self.h.f_st.len();
        match t {
            Term::Init => Some(self.h.s0),
            Term::State(s) => Some(*s),
            Term::St(a) if *a < na => Some(self.h.f_st[*a]),
            Term::St(a) => Some(self.fresh_st[*a - na]),
            Term::Bang(a) => Some(self.h.f_bang[*a]),
            Term::Resp(a, inner) => self.eval(inner, env).map(|s| self.h.f_resp[*a][s]),
            Term::Var(v) => env[*v],
        }
    }
}

fn unbound_var(t: &Term, env: &[Option<usize>]) -> Option<usize> {
    match t {
        Term::Var(v) if env[*v].is_none() => Some(*v),
        Term::Resp(_, inner) => unbound_var(inner, env),
        _ => None,
    }
}

/// Depth-first search for values of the existential variables, binding
/// them left to right through equalities.
fn solve_goals(goals: &mut Vec<Formula>, env: &mut Vec<Option<usize>>, m: &Model, k: usize) -> bool {
    let Some(g) = goals.pop() else {
        return true;
    };
    let ok = match &g {
        Formula::True => solve_goals(goals, env, m, k),
        Formula::False => false,
        Formula::And(fs) => {
            let base = goals.len();
            goals.extend(fs.iter().rev().cloned());
            let r = solve_goals(goals, env, m, k);
            goals.truncate(base);
            r
        }
        Formula::Or(fs) => fs.iter().any(|f| {
            goals.push(f.clone());
            let r = solve_goals(goals, env, m, k);
            goals.pop();
            r
        }),
        Formula::Eq(x, y) | Formula::Ne(x, y) => {
            let eq = matches!(g, Formula::Eq(..));
            match (m.eval(x, env), m.eval(y, env)) {
                (Some(u), Some(v)) => (u == v) == eq && solve_goals(goals, env, m, k),
                (None, Some(v)) if eq && matches!(x, Term::Var(_)) => bind(x, v, goals, env, m, k),
                (Some(u), None) if eq && matches!(y, Term::Var(_)) => bind(y, u, goals, env, m, k),
                _ => {
                    let var = unbound_var(x, env).or_else(|| unbound_var(y, env)).expect("something unbound");
                    (0..k).any(|val| {
                        env[var] = Some(val);
                        goals.push(g.clone());
                        let r = solve_goals(goals, env, m, k);
                        goals.pop();
                        env[var] = None;
                        r
                    })
                }
            }
        }
    };
    goals.push(g);
    ok
}

fn bind(t: &Term, val: usize, goals: &mut Vec<Formula>, env: &mut Vec<Option<usize>>, m: &Model, k: usize) -> bool {
    let Term::Var(v) = t else { unreachable!() };
    env[*v] = Some(val);
    let r = solve_goals(goals, env, m, k);
    env[*v] = None;
    r
}

/// Whether `h` (with its padding actions placed on the listed states)
/// satisfies assertion `i` for some values of the position variables.
pub fn assertion_holds(program: &ConstraintProgram, h: &Hypothesis, i: usize) -> bool {
    let model = Model { h, fresh_st: fresh_values(program, h) };
    let mut env = vec![None; program.var_names.len()];
    let mut goals = vec![program.assertions[i].formula.clone()];
    solve_goals(&mut goals, &mut env, &model, program.k)
}

/// Padding symbols take the hypothesis' padding states in order; unused
/// symbols repeat the initial state.
fn fresh_values(program: &ConstraintProgram, h: &Hypothesis) -> Vec<usize> {
    (0..program.options.fresh).map(|j| h.fresh_states.get(j).copied().unwrap_or(h.s0)).collect()
}

/// Evaluates every assertion; returns the indices that fail.
pub fn failing_assertions(program: &ConstraintProgram, h: &Hypothesis) -> Vec<usize> {
    (0..program.assertions.len()).filter(|&i| !assertion_holds(program, h, i)).collect()
}

pub fn satisfies(program: &ConstraintProgram, h: &Hypothesis) -> bool {
    h.k == program.k
        && h.fresh_states.len() <= program.options.fresh
        && failing_assertions(program, h).is_empty()
}
