use crate::bp::BroadcastProtocol;

use super::dfa::pad_name;
use super::{Builder, Dfa, Naming, ReductionError};

struct Names {
    h: Vec<String>,
    g: Vec<String>,
    s: String,
    c: String,
    x: String,
    bot: String,
    dollar: String,
}

impl Names {
    fn new(naming: Naming, k: usize) -> Self {
        Names {
            h: (1..=k).map(|i| naming.name(&format!("h{i}"), &format!("h{i}"))).collect(),
            g: (1..=k).map(|i| naming.name(&format!("g{i}"), &format!("g{i}"))).collect(),
            s: naming.name("s", "s"),
            c: naming.name("c", "c"),
            x: naming.name("x", "x"),
            bot: naming.name("bot", "⊥"),
            dollar: naming.name("$", "$"),
        }
    }
}

fn dfa_state_name(i: usize, q: &str) -> String {
    format!("{}.{q}", i + 1)
}

fn check_alphabets(dfas: &[Dfa]) -> Result<(), ReductionError> {
    if dfas.is_empty() {
        return Err(ReductionError::BadParameter("need at least one automaton".into()));
    }
    if dfas.iter().any(|d| d.alphabet != dfas[0].alphabet) {
        return Err(ReductionError::AlphabetMismatch);
    }
    Ok(())
}

/// With `k` automata: `h_1 .. h_k s` places one process at each initial
/// automaton state (this takes `k + 1` processes), letters move them, `$`
/// sends rejecting ones to `⊥`, so `⊥` is then enabled iff some automaton
/// rejects. Automaton `i`'s states are named `i.q`.
pub fn intersection_bp(dfas: &[Dfa], naming: Naming) -> Result<BroadcastProtocol, ReductionError> {
    check_alphabets(dfas)?;
    let k = dfas.len();
    let nm = Names::new(naming, k);
    let mut b = Builder::default();
    let h: Vec<usize> = nm.h.iter().map(|n| b.state(n)).collect::<Result<_, _>>()?;
    let g: Vec<usize> = nm.g.iter().map(|n| b.state(n)).collect::<Result<_, _>>()?;
    let ss = b.state(&nm.s)?;
    let sc = b.state(&nm.c)?;
    let sx = b.state(&nm.x)?;
    let sbot = b.state(&nm.bot)?;
    let mut base = Vec::with_capacity(k);
    for (i, d) in dfas.iter().enumerate() {
        base.push(b.num_states());
        for q in &d.states {
            b.state(dfa_state_name(i, q))?;
        }
    }
    for i in 0..k {
        let a = b.action(&nm.h[i], h[i], g[i])?;
        b.respond(a, h[i], if i + 1 < k { h[i + 1] } else { ss });
    }
    for i in 0..k {
        b.action(&nm.g[i], g[i], g[i])?;
    }
    let s = b.action(&nm.s, ss, sc)?;
    b.respond(s, ss, sc);
    for i in 0..k {
        b.respond(s, g[i], base[i] + dfas[i].initial);
    }
    for (l, letter) in dfas[0].alphabet.iter().enumerate() {
        let a = b.action(letter, sc, sc)?;
        for (i, d) in dfas.iter().enumerate() {
            for q in 0..d.states.len() {
                b.respond(a, base[i] + q, base[i] + d.delta[q][l]);
            }
        }
    }
    let dollar = b.action(&nm.dollar, sc, sx)?;
    b.respond(dollar, sc, sx);
    for (i, d) in dfas.iter().enumerate() {
        for q in 0..d.states.len() {
            b.respond(dollar, base[i] + q, if d.accepting[q] { sx } else { sbot });
        }
    }
    let bot = b.action(&nm.bot, sbot, sx)?;
    b.respond(bot, sbot, sx);
    b.action(&nm.x, sx, sx)?;
    for (i, d) in dfas.iter().enumerate() {
        for (q, name) in d.states.iter().enumerate() {
            let st = base[i] + q;
            b.action(pad_name(naming, &dfa_state_name(i, name)), st, st)?;
        }
    }
    Ok(b.build(h[0]))
}

enum Sym {
    H(usize),
    G(usize),
    S,
    Letter(usize),
    Dollar,
    Bot,
    X,
    Other,
}

/// Answers "is `w` feasible with `n` processes" for [`intersection_bp`]
/// using only the shape of `w` and membership in the intersection of the
/// automata' languages. Letters outside the construction's core alphabet
/// (the padding actions) are ignored.
pub fn answer_bp_mq<S: AsRef<str>>(dfas: &[Dfa], w: &[S], n: u32, naming: Naming) -> Result<bool, ReductionError> {
    check_alphabets(dfas)?;
    let k = dfas.len();
    let nm = Names::new(naming, k);
    let classify = |t: &str| -> Sym {
        if let Some(i) = nm.h.iter().position(|x| x == t) {
            Sym::H(i + 1)
        } else if let Some(i) = nm.g.iter().position(|x| x == t) {
            Sym::G(i + 1)
        } else if t == nm.s {
            Sym::S
        } else if t == nm.dollar {
            Sym::Dollar
        } else if t == nm.bot {
            Sym::Bot
        } else if t == nm.x {
            Sym::X
        } else if let Some(l) = dfas[0].letter(t) {
            Sym::Letter(l)
        } else {
            Sym::Other
        }
    };
    #[derive(PartialEq)]
    enum Phase {
        Init,
        Letters,
        Verdict,
    }
    let mut phase = Phase::Init;
    let (mut hs, mut bots) = (0, 0);
    let mut v = Vec::new();
    for t in w {
        let ok = match classify(t.as_ref()) {
            Sym::Other => true,
            Sym::H(i) => {
                let ok = phase == Phase::Init && i == hs + 1;
                hs += 1;
                ok
            }
            Sym::G(i) => phase == Phase::Init && i <= hs,
            Sym::S => {
                let ok = phase == Phase::Init && hs == k;
                phase = Phase::Letters;
                ok
            }
            Sym::Letter(l) => {
                v.push(l);
                phase == Phase::Letters
            }
            Sym::Dollar => {
                let ok = phase == Phase::Letters;
                phase = Phase::Verdict;
                ok
            }
            Sym::Bot => {
                bots += 1;
                phase == Phase::Verdict
            }
            Sym::X => phase == Phase::Verdict,
        };
        if !ok || bots > 1 {
            return Ok(false);
        }
    }
    let n = n as usize;
    if phase != Phase::Verdict {
        return Ok(n > k || (phase == Phase::Init && hs <= n));
    }
    if n <= k {
        return Ok(false);
    }
    let member = dfas.iter().all(|d| d.accepts(&v));
    Ok(if bots == 1 { !member } else { true })
}
