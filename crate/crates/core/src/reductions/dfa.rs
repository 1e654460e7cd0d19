use rand::Rng;

use crate::bp::BroadcastProtocol;
use crate::sample::{Sample, SampleEntry};

use super::{Builder, Naming, ReductionError};

/// Complete deterministic automaton over named letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: usize,
    /// `delta[q][letter]`
    pub delta: Vec<Vec<usize>>,
    pub accepting: Vec<bool>,
}

impl Dfa {
    pub fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        initial: usize,
        delta: Vec<Vec<usize>>,
        accepting: Vec<bool>,
    ) -> Result<Self, ReductionError> {
        let bad = |m: &str| Err(ReductionError::InvalidDfa(m.to_string()));
        if states.is_empty() {
            return bad("no states");
        }
        if initial >= states.len() {
            return bad("initial state out of range");
        }
        if delta.len() != states.len() || accepting.len() != states.len() {
            return bad("tables do not match the state count");
        }
        if delta.iter().any(|row| row.len() != alphabet.len() || row.iter().any(|&q| q >= states.len())) {
            return bad("transition function is not total");
        }
        for names in [&alphabet, &states] {
            let mut seen = std::collections::HashSet::new();
            if let Some(n) = names.iter().find(|n| !seen.insert(n.as_str())) {
                return Err(ReductionError::DuplicateName(n.clone()));
            }
        }
        Ok(Dfa { alphabet, states, initial, delta, accepting })
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|l| l == name)
    }

    pub fn run(&self, w: &[usize]) -> usize {
        w.iter().fold(self.initial, |q, &l| self.delta[q][l])
    }

    pub fn accepts(&self, w: &[usize]) -> bool {
        self.accepting[self.run(w)]
    }

    pub fn accepts_names<S: AsRef<str>>(&self, w: &[S]) -> Result<bool, ReductionError> {
        let ids = self.letters(w)?;
        Ok(self.accepts(&ids))
    }

    pub fn letters<S: AsRef<str>>(&self, w: &[S]) -> Result<Vec<usize>, ReductionError> {
        w.iter()
            .map(|l| self.letter(l.as_ref()).ok_or_else(|| ReductionError::UnknownLetter(l.as_ref().to_string())))
            .collect()
    }
}

/// Uniform random complete automaton with states `q0..`.
pub fn random_dfa<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: &[&str]) -> Dfa {
    let delta = (0..states).map(|_| alphabet.iter().map(|_| rng.gen_range(0..states)).collect()).collect();
    let accepting = (0..states).map(|_| rng.gen_bool(0.5)).collect();
    Dfa::new(
        alphabet.iter().map(|s| s.to_string()).collect(),
        (0..states).map(|q| format!("q{q}")).collect(),
        0,
        delta,
        accepting,
    )
    .expect("random automaton is well formed")
}

pub(crate) struct Reserved {
    pub i: String,
    pub c: String,
    pub x: String,
    pub top: String,
    pub bot: String,
    pub dollar: String,
}

impl Reserved {
    pub(crate) fn new(naming: Naming) -> Self {
        Reserved {
            i: naming.name("i", "i"),
            c: naming.name("c", "c"),
            x: naming.name("x", "x"),
            top: naming.name("top", "⊤"),
            bot: naming.name("bot", "⊥"),
            dollar: naming.name("$", "$"),
        }
    }

    fn check_letters(&self, alphabet: &[String]) -> Result<(), ReductionError> {
        for l in alphabet {
            if [&self.i, &self.x, &self.top, &self.bot, &self.dollar].contains(&l) {
                return Err(ReductionError::ReservedName(l.clone()));
            }
        }
        Ok(())
    }
}

pub(crate) fn pad_name(naming: Naming, q: &str) -> String {
    match naming {
        Naming::Namespaced => format!("__pad_{q}"),
        Naming::Literal => q.to_string(),
    }
}

/// Protocol whose two-process runs `i w $` end with the automaton state's
/// verdict: `⊤` is then enabled iff `w` is accepted, `⊥` iff rejected.
pub fn dfa_to_bp(d: &Dfa, naming: Naming) -> Result<BroadcastProtocol, ReductionError> {
    let r = Reserved::new(naming);
    r.check_letters(&d.alphabet)?;
    let mut b = Builder::default();
    let si = b.state(&r.i)?;
    let sc = b.state(&r.c)?;
    let sx = b.state(&r.x)?;
    let stop = b.state(&r.top)?;
    let sbot = b.state(&r.bot)?;
    let q0 = b.num_states();
    for q in &d.states {
        b.state(q)?;
    }
    let i = b.action(&r.i, si, q0 + d.initial)?;
    b.respond(i, si, sc);
    for (l, name) in d.alphabet.iter().enumerate() {
        let a = b.action(name, sc, sc)?;
        for q in 0..d.states.len() {
            b.respond(a, q0 + q, q0 + d.delta[q][l]);
        }
    }
    let dollar = b.action(&r.dollar, sc, sx)?;
    b.respond(dollar, sc, sx);
    for q in 0..d.states.len() {
        b.respond(dollar, q0 + q, if d.accepting[q] { stop } else { sbot });
    }
    b.action(&r.x, sx, sx)?;
    let top = b.action(&r.top, stop, stop)?;
    b.respond(top, sx, stop);
    let bot = b.action(&r.bot, sbot, sbot)?;
    b.respond(bot, sx, sbot);
    for (q, name) in d.states.iter().enumerate() {
        b.action(pad_name(naming, name), q0 + q, q0 + q)?;
    }
    Ok(b.build(si))
}

/// Turns a labeled word list for an automaton with at most `k` states into
/// a sample for protocols with at most `k + 5` states.
pub fn dfa_sample_to_bp_sample(
    words: &[(Vec<String>, bool)],
    alphabet: &[String],
    k: usize,
    naming: Naming,
) -> Result<(Sample, usize), ReductionError> {
    let r = Reserved::new(naming);
    r.check_letters(alphabet)?;
    for (w, _) in words {
        if let Some(l) = w.iter().find(|l| !alphabet.contains(l)) {
            return Err(ReductionError::UnknownLetter(l.clone()));
        }
    }
    let (i, x, top, bot, dollar) = (r.i.as_str(), r.x.as_str(), r.top.as_str(), r.bot.as_str(), r.dollar.as_str());
    let mut out: Vec<SampleEntry> = Vec::new();
    let mut add = |parts: &[&[&str]], n: u32, label: bool| {
        let word: Vec<&str> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        out.push(SampleEntry::new(&word, n, label));
    };
    add(&[&[i]], 1, true);
    add(&[&[i, i]], 2, false);
    add(&[&[i, x]], 2, false);
    add(&[&[i, top]], 2, false);
    add(&[&[i, bot]], 2, false);
    for s in alphabet {
        let s = s.as_str();
        add(&[&[i, s, i]], 2, false);
        add(&[&[i, s, x]], 2, false);
        add(&[&[i, s, dollar, x, i]], 2, false);
    }
    for (w, label) in words {
        let w: Vec<&str> = w.iter().map(String::as_str).collect();
        let iw: Vec<&str> = std::iter::once(i).chain(w.iter().copied()).collect();
        let (yes, no) = if *label { (top, bot) } else { (bot, top) };
        add(&[&iw, &[dollar, yes, yes]], 2, true);
        add(&[&iw, &[dollar, x, x, yes, yes]], 2, true);
        add(&[&iw, &[dollar, top, bot]], 2, false);
        add(&[&iw, &[dollar, bot, top]], 2, false);
        add(&[&iw, &[yes]], 2, false);
        add(&[&iw, &[dollar, no]], 2, false);
        if *label {
            add(&[&iw, &[dollar, top, i]], 2, false);
        }
        add(&[&iw, &[dollar, yes, x]], 2, false);
        for s in alphabet {
            let s = s.as_str();
            add(&[&iw, &[dollar, yes, s]], 2, false);
            add(&[&iw, &[dollar, s]], 2, false);
        }
    }
    Ok((Sample::new(out)?, k + 5))
}
