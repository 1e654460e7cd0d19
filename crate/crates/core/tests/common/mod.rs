//! Criterion checks shared by the acceptance harness and the integration
//! tests. Each returns a verdict with the measured values.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bplearn::bp::examples::{b1, b2, reset_pull};
use bplearn::bp::{random_protocol, ActionId, BroadcastProtocol, Configuration, RunOutcome};
use bplearn::charset::generate_cs;
use bplearn::inference::constraints::assertion_holds;
use bplearn::inference::{
    build_constraints, consistency_decision, infer_a, infer_i, solve, Hypothesis, InferOptions, Mode,
    ProgramOptions, SolveError, SolveOptions,
};
use bplearn::reductions::{
    alleq3sat_to_sample, answer_bp_mq, assignment_to_bp, dfa_sample_to_bp_sample, dfa_to_bp, exponential_fixture_p5,
    family_exponential, family_quadratic, intersection_bp, random_dfa, same_up_to_order, AllEq3Cnf, Dfa, Naming,
};
use bplearn::sample::{Sample, SampleEntry};

pub const SEED: u64 = 0x5eed_b9a7;
const BUDGET: usize = 5_000_000;

#[derive(Debug, Clone)]
pub struct Verdict {
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Verdict {
    fn timed(limit: Duration, start: Instant, passed: bool, detail: String) -> Self {
        let elapsed = start.elapsed();
        let in_time = elapsed < limit;
        let detail = if in_time { detail } else { format!("{detail}; over the {limit:?} limit") };
        Verdict { passed: passed && in_time, detail, elapsed }
    }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn counts(bp: &BroadcastProtocol, n: u32, word: &str) -> Option<Vec<u32>> {
    match bp.run_named(n, word).expect("known letters") {
        RunOutcome::Completed(c) => Some(c.counts().to_vec()),
        RunOutcome::Blocked { .. } => None,
    }
}

fn names(bp: &BroadcastProtocol, w: &[ActionId]) -> Vec<String> {
    w.iter().map(|&a| bp.action_name(a).to_string()).collect()
}

/// Random protocol without hidden states.
pub fn small_bp(r: &mut impl Rng, max_states: usize, max_actions: usize) -> BroadcastProtocol {
    let states = r.gen_range(1..=max_states);
    let actions = r.gen_range(states..=max_actions.max(states));
    random_protocol(r, states, actions)
}

/// Half the time a random walk of `n` processes (possibly followed by one
/// blocked letter), otherwise uniform letters.
pub fn random_word(r: &mut impl Rng, bp: &BroadcastProtocol, n: u32, max_len: usize) -> Vec<ActionId> {
    let len = r.gen_range(0..=max_len);
    let k = bp.num_actions();
    if r.gen_bool(0.5) {
        return (0..len).map(|_| r.gen_range(0..k)).collect();
    }
    let mut w = walk(r, bp, n, len);
    if r.gen_bool(0.3) {
        w.push(r.gen_range(0..k));
    }
    w
}

/// Feasible word of at most `len` letters, choosing uniformly among the
/// enabled actions.
pub fn walk(r: &mut impl Rng, bp: &BroadcastProtocol, n: u32, len: usize) -> Vec<ActionId> {
    let mut c = bp.initial_configuration(n).counts().to_vec();
    let mut next = Vec::new();
    let mut w = Vec::new();
    while w.len() < len {
        let enabled: Vec<ActionId> = (0..bp.num_actions()).filter(|&a| bp.is_enabled(&c, a)).collect();
        let Some(&a) = enabled.choose(r) else { break };
        bp.step_into(&c, a, &mut next);
        std::mem::swap(&mut c, &mut next);
        w.push(a);
    }
    w
}

fn labeled(bp: &BroadcastProtocol, w: &[ActionId], n: u32) -> SampleEntry {
    SampleEntry::new(&names(bp, w), n, bp.feasible(n, w).unwrap())
}

// ---------------------------------------------------------------- 1

pub fn c1_semantics() -> Verdict {
    let start = Instant::now();
    let bp = reset_pull();
    let a = bp.action_id("a").unwrap();
    let stepped = bp.step(&Configuration::new(vec![2, 2]), a).unwrap();
    let (x, xx, xy) = (counts(&bp, 9, "a"), counts(&bp, 9, "a a"), counts(&bp, 9, "a b"));
    let passed = stepped.counts() == [3, 1] && x.is_some() && x == xx && xy.as_deref() == Some(&[0, 9][..]);
    let detail = format!("[2,2] -a-> {stepped}; n=9: a {x:?}, a a {xx:?}, a b {xy:?}");
    Verdict::timed(Duration::from_secs(1), start, passed, detail)
}

// ---------------------------------------------------------------- 2

fn all_words(letters: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in letters {
                let mut v = w.clone();
                v.push(l.to_string());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn two_state_oracle(n: u32, w: &[String]) -> bool {
    if n == 1 {
        w.iter().all(|l| l == "a")
    } else {
        w.first().map_or(true, |l| l == "a")
    }
}

pub fn c2_two_state_examples() -> Verdict {
    let start = Instant::now();
    let universe = all_words(&["a", "b"], 8);
    let mut bad = Vec::new();
    for (label, bp) in [("B1", b1()), ("B2", b2())] {
        for n in 1..=3 {
            let got: BTreeSet<Vec<String>> =
                bp.enumerate_language(n, 8, BUDGET).unwrap().iter().map(|w| names(&bp, w)).collect();
            let want: BTreeSet<Vec<String>> = universe.iter().filter(|w| two_state_oracle(n, w)).cloned().collect();
            if got != want {
                bad.push(format!("{label} n={n}: {} words vs {} expected", got.len(), want.len()));
            }
        }
        let cut = bp.detect_cutoff(6, BUDGET).unwrap();
        if cut != Some(2) {
            bad.push(format!("{label} cutoff {cut:?}"));
        }
    }
    for n in 1..=3 {
        if !b1().lang_equal_at(&b2(), n, BUDGET).unwrap().is_equal() {
            bad.push(format!("B1 and B2 differ at n={n}"));
        }
    }
    let detail = if bad.is_empty() {
        "languages at n=1..3 up to length 8 match, equal for n=1..3, cutoff 2 for both".to_string()
    } else {
        bad.join("; ")
    };
    Verdict::timed(Duration::from_secs(1), start, bad.is_empty(), detail)
}

// ---------------------------------------------------------------- 3

/// Largest set of pairwise apart actions. The sending states of apart
/// actions differ, so this bounds the state count from below.
pub fn apartness_clique(sample: &Sample) -> usize {
    let apart = sample.apartness();
    let k = apart.len();
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let members: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        if members.len() > best && members.iter().all(|&i| members.iter().all(|&j| i == j || apart[i][j])) {
            best = members.len();
        }
    }
    best
}

fn same_language_up_to(x: &BroadcastProtocol, y: &BroadcastProtocol, n_max: u32) -> Result<(), String> {
    for n in 1..=n_max {
        match x.lang_equal_at(y, n, BUDGET) {
            Ok(c) if c.is_equal() => {}
            Ok(c) => return Err(format!("differ at n={n} on `{}`", x.format_word(c.counterexample().unwrap()))),
            Err(e) => return Err(format!("n={n}: {e}")),
        }
    }
    Ok(())
}

pub struct RoundTrip {
    pub corpus: usize,
    pub rejected: usize,
    pub failures: Vec<String>,
}

/// Candidates that pass every filter: cutoff at most 4, a characteristic
/// set that reaches its fixpoint and mentions every action, and an
/// apartness clique as large as the state set (so the protocol is minimal).
pub fn learning_round_trip(corpus: usize, extensions: usize) -> RoundTrip {
    let mut r = rng(3);
    let opts = InferOptions::default();
    let mut out = RoundTrip { corpus: 0, rejected: 0, failures: Vec::new() };
    while out.corpus < corpus {
        let bp = small_bp(&mut r, 4, 4);
        let Ok(Some(cut)) = bp.detect_cutoff(4, BUDGET) else {
            out.rejected += 1;
            continue;
        };
        let Ok(cs) = generate_cs(&bp, 12, 200_000) else {
            out.rejected += 1;
            continue;
        };
        if cs.sample.alphabet().len() != bp.num_actions() || apartness_clique(&cs.sample) != bp.num_states() {
            out.rejected += 1;
            continue;
        }
        out.corpus += 1;
        let id = out.corpus;
        let mut check = |sample: &Sample, what: &str| match infer_a(sample, &opts) {
            Ok(got) if got.states() != bp.num_states() => {
                out.failures.push(format!("#{id} {what}: {} states, target {}", got.states(), bp.num_states()))
            }
            Ok(got) => {
                if let Err(e) = same_language_up_to(&got.protocol, &bp, cut + 1) {
                    out.failures.push(format!("#{id} {what}: {e}"));
                }
            }
            Err(e) => out.failures.push(format!("#{id} {what}: {e}")),
        };
        check(&cs.sample, "characteristic set");
        for x in 0..extensions {
            let extra: Vec<SampleEntry> = (0..r.gen_range(1..=6))
                .map(|_| {
                    let n = r.gen_range(1..=4);
                    let w = random_word(&mut r, &bp, n, 6);
                    labeled(&bp, &w, n)
                })
                .collect();
            let bigger = cs.sample.extended(extra).expect("labels come from the target");
            check(&bigger, &format!("extension {x}"));
        }
    }
    out
}

pub fn c3_learning_round_trip() -> Verdict {
    let start = Instant::now();
    let rt = learning_round_trip(50, 10);
    let detail = format!(
        "{} protocols ({} candidates rejected by the filters), 11 samples each; {} failures{}",
        rt.corpus,
        rt.rejected,
        rt.failures.len(),
        rt.failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
    );
    Verdict::timed(Duration::from_secs(300), start, rt.failures.is_empty(), detail)
}

// ---------------------------------------------------------------- 4

pub fn soundness_failures(pairs: usize) -> Vec<String> {
    let mut r = rng(4);
    let mut bad = Vec::new();
    for i in 0..pairs {
        let bp = small_bp(&mut r, 4, 5);
        let entries: Vec<SampleEntry> = (0..r.gen_range(1..=12))
            .map(|_| {
                let n = r.gen_range(1..=4);
                let w = random_word(&mut r, &bp, n, 6);
                labeled(&bp, &w, n)
            })
            .collect();
        let sample = Sample::new(entries).expect("labels come from one protocol");
        match infer_i(&sample, &InferOptions::default()) {
            Ok(got) if !sample.consistent_with(&got.protocol) => {
                bad.push(format!("pair {i}: entries {:?} violated", sample.violations(&got.protocol)))
            }
            Ok(got) if got.states() > bp.num_states() => {
                bad.push(format!("pair {i}: {} states but the source has {}", got.states(), bp.num_states()))
            }
            Ok(_) => {}
            Err(e) => bad.push(format!("pair {i}: {e}")),
        }
    }
    bad
}

pub fn c4_soundness() -> Verdict {
    let start = Instant::now();
    let bad = soundness_failures(200);
    let detail = format!("200 pairs, {} inconsistent results{}", bad.len(), first(&bad));
    Verdict::timed(Duration::from_secs(300), start, bad.is_empty(), detail)
}

fn first(v: &[String]) -> String {
    v.first().map(|f| format!(", first: {f}")).unwrap_or_default()
}

// ---------------------------------------------------------------- 5

const BINARY: [&str; 2] = ["0", "1"];

/// Words of the automaton simulation checked at two processes, the
/// one-process language projected onto the construction letters, and the
/// cutoff.
pub fn automaton_simulation_failures(d: &Dfa) -> Vec<String> {
    let bp = dfa_to_bp(d, Naming::Namespaced).unwrap();
    let mut bad = Vec::new();
    for w in all_words(&BINARY, 6) {
        let accepted = d.accepts_names(&w).unwrap();
        let text = w.join(" ");
        for (end, want) in [("__top", accepted), ("__bot", !accepted)] {
            let word = format!("__i {text} __$ {end}");
            let got = bp.run_named(2, &word).unwrap().is_feasible();
            if got != want {
                bad.push(format!("`{word}` feasible={got}, accepted={accepted}"));
            }
        }
    }
    let projected: BTreeSet<Vec<String>> = bp
        .enumerate_language(1, 6, BUDGET)
        .unwrap()
        .iter()
        .map(|w| names(&bp, w).into_iter().filter(|a| !a.starts_with("__pad_")).collect())
        .collect();
    let want: BTreeSet<Vec<String>> = [vec![], vec!["__i".to_string()]].into();
    if projected != want {
        bad.push(format!("one-process projection {projected:?}"));
    }
    bad
}

pub fn c5_automaton_simulation() -> Verdict {
    let start = Instant::now();
    let mut r = rng(5);
    let mut bad = Vec::new();
    for i in 0..100 {
        let states = r.gen_range(1..=5);
        let d = random_dfa(&mut r, states, &BINARY);
        bad.extend(automaton_simulation_failures(&d).into_iter().map(|f| format!("automaton {i}: {f}")));
    }
    let detail = format!("100 automata, 127 words each at n=2 plus the n=1 projection; {} failures{}", bad.len(), first(&bad));
    Verdict::timed(Duration::from_secs(120), start, bad.is_empty(), detail)
}

// ---------------------------------------------------------------- 6, 7

pub struct Goal {
    pub processes: u32,
    /// Shortest witness over the least process count and the two above it.
    pub shortest: usize,
    pub witness: String,
}

pub fn goal_requirements(bp: &BroadcastProtocol, n_max: u32) -> Option<Goal> {
    let top = bp.action_id("a_top").expect("family has a_top");
    let (processes, w) = bp.min_processes_for_action(top, n_max, 20_000_000).unwrap()?;
    let mut best = w;
    for n in processes + 1..=processes + 2 {
        // a larger system may exceed the node budget; the least count already gave a witness
        if let Ok(Some(v)) = bp.shortest_word_with_action(top, n, best.len(), 20_000_000) {
            if v.len() < best.len() {
                best = v;
            }
        }
    }
    Some(Goal { processes, shortest: best.len(), witness: bp.format_word(&best) })
}

/// The equality at (3,4) is a known failure: the least process count there
/// is 11. Only that exact deviation is excused.
pub fn c6_quadratic_family() -> (Verdict, bool) {
    let start = Instant::now();
    let mut passed = true;
    let mut excusable = true;
    let mut parts = Vec::new();
    for (n, m) in [(2usize, 3usize), (3, 4)] {
        let bp = family_quadratic(m, n, n * m).unwrap();
        let nm = (n * m) as u32;
        match goal_requirements(&bp, nm + 4) {
            Some(g) => {
                let ok = g.processes == nm && g.shortest >= n * m;
                passed &= ok;
                excusable &= ok || ((n, m) == (3, 4) && g.processes == 11 && g.shortest >= n * m);
                parts.push(format!(
                    "(n,m)=({n},{m}): {} processes (n*m={nm}), witness length {}{}",
                    g.processes,
                    g.shortest,
                    if ok { "" } else { " MISMATCH" }
                ));
            }
            None => {
                passed = false;
                excusable = false;
                parts.push(format!("(n,m)=({n},{m}): a_top unreachable up to {}", nm + 4));
            }
        }
    }
    let v = Verdict::timed(Duration::from_secs(120), start, passed, parts.join("; "));
    let excusable = excusable && v.elapsed < Duration::from_secs(120);
    (v, excusable)
}

pub fn c7_exponential_family() -> Verdict {
    let start = Instant::now();
    let mut passed = true;
    let mut parts = Vec::new();
    let p5 = family_exponential(5).unwrap();
    if !same_up_to_order(&p5, &exponential_fixture_p5()) {
        passed = false;
        parts.push("P5 generator and fixture differ".to_string());
    }
    for (label, bp, product) in [("P3", family_exponential(3).unwrap(), 6usize), ("P5", p5, 30)] {
        match goal_requirements(&bp, 40) {
            Some(g) => {
                passed &= g.shortest >= product;
                parts.push(format!("{label}: {} processes, shortest witness {} (bound {product})", g.processes, g.shortest));
            }
            None => {
                passed = false;
                parts.push(format!("{label}: a_top unreachable"));
            }
        }
    }
    Verdict::timed(Duration::from_secs(300), start, passed, parts.join("; "))
}

// ---------------------------------------------------------------- 8

pub struct SatCase {
    pub decided: Option<usize>,
    pub bound: usize,
    pub witness_consistent: Option<bool>,
    pub elapsed: Duration,
}

pub fn sat_case(phi: &AllEq3Cnf) -> SatCase {
    let start = Instant::now();
    let (sample, bound) = alleq3sat_to_sample(phi).unwrap();
    let decided = consistency_decision(&sample, bound, &SolveOptions::default()).unwrap();
    let witness_consistent =
        phi.satisfying_assignments().first().map(|a| sample.consistent_with(&assignment_to_bp(phi, a).unwrap()));
    if let Some(d) = &decided {
        assert!(sample.consistent_with(&d.protocol), "solver returned an inconsistent protocol");
    }
    SatCase { decided: decided.map(|d| d.states()), bound, witness_consistent, elapsed: start.elapsed() }
}

pub fn one_clause() -> AllEq3Cnf {
    AllEq3Cnf::new(3, vec![[1, 2, 3]]).unwrap()
}

pub fn two_clause_contradiction() -> AllEq3Cnf {
    AllEq3Cnf::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap()
}

pub fn ends_in_one() -> Dfa {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Dfa::new(s(&BINARY), s(&["q0", "q1"]), 0, vec![vec![0, 1], vec![0, 1]], vec![false, true]).unwrap()
}

pub struct DfaCase {
    pub bound: usize,
    pub decided: Option<usize>,
    pub automaton_witness: bool,
}

pub fn dfa_sample_case() -> DfaCase {
    let d = ends_in_one();
    let words = vec![(vec!["1".to_string()], true), (vec!["0".to_string()], false)];
    let (sample, bound) = dfa_sample_to_bp_sample(&words, &d.alphabet, d.states.len(), Naming::Namespaced).unwrap();
    let decided = consistency_decision(&sample, bound, &SolveOptions::default()).unwrap();
    if let Some(got) = &decided {
        assert!(sample.consistent_with(&got.protocol), "solver returned an inconsistent protocol");
    }
    let automaton_witness = sample.consistent_with(&dfa_to_bp(&d, Naming::Namespaced).unwrap());
    DfaCase { bound, decided: decided.map(|d| d.states()), automaton_witness }
}

/// The UNSAT half is listed in the known failures: the sample for the
/// two-clause contradiction has a consistent protocol within the bound.
pub fn c8_reductions() -> (Verdict, bool) {
    let start = Instant::now();
    let sat = sat_case(&one_clause());
    let unsat = sat_case(&two_clause_contradiction());
    let dfa = dfa_sample_case();
    let sat_ok = sat.decided.is_some() && sat.witness_consistent == Some(true);
    let unsat_ok = unsat.decided.is_none();
    let dfa_ok = dfa.decided.is_some();
    let detail = format!(
        "one clause: {} at k={} (assignment witness consistent: {:?}); contradiction: {} at k={}; \
         automaton sample: {} at k={} (automaton protocol consistent: {})",
        show(sat.decided),
        sat.bound,
        sat.witness_consistent,
        show(unsat.decided),
        unsat.bound,
        show(dfa.decided),
        dfa.bound,
        dfa.automaton_witness
    );
    let v = Verdict::timed(Duration::from_secs(600), start, sat_ok && unsat_ok && dfa_ok, detail);
    // only the UNSAT half is excused
    let excusable = sat_ok && dfa_ok && !unsat_ok && v.elapsed < Duration::from_secs(600);
    (v, excusable)
}

fn show(d: Option<usize>) -> String {
    match d {
        Some(k) => format!("SAT ({k} states)"),
        None => "UNSAT".to_string(),
    }
}

// ---------------------------------------------------------------- 9

/// Depth-first over core-alphabet words (construction letters plus
/// automaton letters), comparing feasibility with the oracle's answer.
pub fn membership_disagreements(dfas: &[Dfa], max_len: usize) -> Vec<String> {
    let naming = Naming::Namespaced;
    let bp = intersection_bp(dfas, naming).unwrap();
    let core: Vec<(ActionId, String)> = (0..bp.num_actions())
        .map(|a| (a, bp.action_name(a).to_string()))
        .filter(|(_, name)| !name.starts_with("__pad_"))
        .collect();
    let k = dfas.len() as u32;
    let mut bad = Vec::new();
    for n in 1..=k + 2 {
        let mut word = Vec::new();
        dfs_mq(&bp, dfas, &core, n, Some(bp.initial_configuration(n).counts().to_vec()), &mut word, max_len, &mut bad);
    }
    bad
}

#[allow(clippy::too_many_arguments)]
fn dfs_mq(
    bp: &BroadcastProtocol,
    dfas: &[Dfa],
    core: &[(ActionId, String)],
    n: u32,
    config: Option<Vec<u32>>,
    word: &mut Vec<String>,
    left: usize,
    bad: &mut Vec<String>,
) {
    let feasible = config.is_some();
    let mq = answer_bp_mq(dfas, word, n, Naming::Namespaced).unwrap();
    if feasible != mq && bad.len() < 10 {
        bad.push(format!("n={n} `{}`: feasible={feasible}, oracle={mq}", word.join(" ")));
    }
    if left == 0 {
        return;
    }
    let mut next = Vec::new();
    for (a, name) in core {
        let succ = config.as_ref().filter(|c| bp.step_into(c, *a, &mut next)).map(|_| next.clone());
        word.push(name.clone());
        dfs_mq(bp, dfas, core, n, succ, word, left - 1, bad);
        word.pop();
    }
}

pub fn c9_intersection() -> Verdict {
    let start = Instant::now();
    let mut r = rng(9);
    let mut bad = Vec::new();
    let mut parts = Vec::new();
    for k in [2usize, 3] {
        let dfas: Vec<Dfa> = (0..k)
            .map(|_| {
                let states = r.gen_range(1..=3);
                random_dfa(&mut r, states, &BINARY)
            })
            .collect();
        let bp = intersection_bp(&dfas, Naming::Namespaced).unwrap();
        let cut = bp.detect_cutoff(k as u32 + 3, BUDGET).unwrap();
        if cut != Some(k as u32 + 1) {
            bad.push(format!("k={k}: cutoff {cut:?}"));
        }
        let dis = membership_disagreements(&dfas, 6);
        parts.push(format!("k={k}: cutoff {cut:?}, {} disagreements", dis.len()));
        bad.extend(dis);
    }
    let detail = format!("{}{}", parts.join("; "), first(&bad));
    Verdict::timed(Duration::from_secs(120), start, bad.is_empty(), detail)
}

// ---------------------------------------------------------------- 10

pub const CASES: usize = 1000;

fn step_oracle(bp: &BroadcastProtocol, c: &[u32], a: ActionId) -> Option<Vec<u32>> {
    let src = bp.send_source(a);
    if c[src] == 0 {
        return None;
    }
    let mut rest = c.to_vec();
    rest[src] -= 1;
    let mut out = vec![0; c.len()];
    for (s, &cnt) in rest.iter().enumerate() {
        out[bp.response(a, s)] += cnt;
    }
    out[bp.send_target(a)] += 1;
    Some(out)
}

pub fn conservation_failures(cases: usize) -> Vec<String> {
    let mut r = rng(101);
    let mut bad = Vec::new();
    for i in 0..cases {
        let bp = small_bp(&mut r, 4, 5);
        let c: Vec<u32> = loop {
            let c: Vec<u32> = (0..bp.num_states()).map(|_| r.gen_range(0..4)).collect();
            if c.iter().sum::<u32>() > 0 {
                break c;
            }
        };
        let a = r.gen_range(0..bp.num_actions());
        let got = bp.step(&Configuration::new(c.clone()), a).ok().map(|x| x.counts().to_vec());
        let want = step_oracle(&bp, &c, a);
        let sum_kept = got.as_ref().map_or(true, |g| g.iter().sum::<u32>() == c.iter().sum::<u32>());
        if got != want || !sum_kept {
            bad.push(format!("case {i}: {c:?} -{}-> {got:?}, expected {want:?}", bp.action_name(a)));
        }
    }
    bad
}

pub fn prefix_failures(cases: usize) -> Vec<String> {
    let mut r = rng(102);
    let mut bad = Vec::new();
    for i in 0..cases {
        let bp = small_bp(&mut r, 4, 5);
        let n = r.gen_range(1..=5);
        let w = random_word(&mut r, &bp, n, 8);
        if bp.feasible(n, &w).unwrap() {
            if let Some(j) = (0..w.len()).find(|&j| !bp.feasible(n, &w[..j]).unwrap()) {
                bad.push(format!("case {i}: `{}` feasible but its prefix of length {j} is not", bp.format_word(&w)));
            }
        }
    }
    bad
}

pub fn monotonicity_failures(cases: usize) -> Vec<String> {
    let mut r = rng(103);
    let mut bad = Vec::new();
    for i in 0..cases {
        let bp = small_bp(&mut r, 4, 5);
        let n = r.gen_range(1..=5);
        let w = random_word(&mut r, &bp, n, 8);
        if bp.feasible(n, &w).unwrap() && !bp.feasible(n + 1, &w).unwrap() {
            bad.push(format!("case {i}: `{}` feasible at {n}, not at {}", bp.format_word(&w), n + 1));
        }
    }
    bad
}

/// Returns the failures and how many cases met the hypothesis. Candidates
/// come from walks of a larger system cut at the first letter the
/// `m`-process system cannot take, so most cases are not vacuous.
pub fn progress_failures(cases: usize) -> (Vec<String>, usize) {
    let mut r = rng(104);
    let mut bad = Vec::new();
    let mut relevant = 0;
    for i in 0..cases {
        let bp = small_bp(&mut r, 3, 4);
        let m = r.gen_range(1..=5);
        let wa = if r.gen_bool(0.8) {
            let n = r.gen_range(m + 1..=6);
            let big = walk(&mut r, &bp, n, 8);
            match (1..=big.len()).find(|&j| !bp.feasible(m, &big[..j]).unwrap()) {
                Some(j) => big[..j].to_vec(),
                None => big,
            }
        } else {
            random_word(&mut r, &bp, m, 6)
        };
        let Some((_, w)) = wa.split_last() else { continue };
        if !bp.feasible(m, w).unwrap() || bp.feasible(m, &wa).unwrap() {
            continue;
        }
        if (m + 1..=6).any(|n| bp.feasible(n, &wa).unwrap()) {
            relevant += 1;
            if !bp.feasible(m + 1, &wa).unwrap() {
                bad.push(format!("case {i}: `{}` m={m}", bp.format_word(&wa)));
            }
        }
    }
    (bad, relevant)
}

/// Every hypothesis with `s0 = 0` (states can be relabeled) over the
/// program's alphabet; padding goes on the states nothing sends from.
pub fn exhaustive_model(program: &bplearn::inference::ConstraintProgram) -> Option<Hypothesis> {
    let k = program.k;
    let actions = program.encoded.actions.clone();
    let na = actions.len();
    let cells = 2 * na + na * k;
    let total = (k as u64).pow(cells as u32);
    let mut digits = vec![0usize; cells];
    for _ in 0..total {
        let f_st = digits[..na].to_vec();
        let f_bang = digits[na..2 * na].to_vec();
        let f_resp: Vec<Vec<usize>> = digits[2 * na..].chunks(k.max(1)).map(<[usize]>::to_vec).collect();
        let fresh_states: Vec<usize> = (0..k).filter(|s| !f_st.contains(s)).collect();
        let h = Hypothesis { k, actions: actions.clone(), s0: 0, f_st, f_bang, f_resp, fresh_states };
        if h.fresh_states.len() <= program.options.fresh
            && (0..program.assertions.len()).all(|i| assertion_holds(program, &h, i))
        {
            return Some(h);
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < k {
                break;
            }
            *d = 0;
        }
    }
    None
}

fn tiny_sample(r: &mut impl Rng) -> Option<Sample> {
    let entries: Vec<SampleEntry> = (0..r.gen_range(1..=5))
        .map(|_| {
            let len = r.gen_range(1..=4);
            let w: Vec<&str> = (0..len).map(|_| ["a", "b"][r.gen_range(0..2)]).collect();
            SampleEntry::new(&w, r.gen_range(1..=3), r.gen_bool(0.5))
        })
        .collect();
    Sample::new(entries).ok()?.normalize().ok().map(|(s, _)| s)
}

/// Native search against the constraint evaluator: a SAT answer must
/// satisfy every assertion and the sample, an UNSAT answer must leave no
/// model in the exhaustive enumeration. Returns failures and the SAT/UNSAT
/// split.
pub fn backend_failures(cases: usize) -> (Vec<String>, usize, usize) {
    let mut r = rng(105);
    let (mut bad, mut sat, mut unsat) = (Vec::new(), 0, 0);
    let mut i = 0;
    while i < cases {
        let Some(sample) = tiny_sample(&mut r) else { continue };
        let k = r.gen_range(1..=3);
        let Ok(program) = build_constraints(&sample, k, ProgramOptions { mode: Mode::Plain, fresh: k }) else {
            continue;
        };
        i += 1;
        match solve(&program, &SolveOptions::default()) {
            Ok(h) => {
                sat += 1;
                let held = (0..program.assertions.len()).all(|j| assertion_holds(&program, &h, j));
                if !held || !sample.consistent_with(&h.to_protocol()) {
                    bad.push(format!("case {i} k={k}: native model rejected (evaluator ok: {held})"));
                }
            }
            Err(SolveError::Unsat(_)) => {
                unsat += 1;
                if let Some(h) = exhaustive_model(&program) {
                    bad.push(format!("case {i} k={k}: native UNSAT but enumeration found {h:?}"));
                }
            }
            Err(e) => bad.push(format!("case {i}: {e}")),
        }
    }
    (bad, sat, unsat)
}

pub fn c10_properties() -> Verdict {
    let start = Instant::now();
    let cons = conservation_failures(CASES);
    let pre = prefix_failures(CASES);
    let mono = monotonicity_failures(CASES);
    let (prog, relevant) = progress_failures(CASES);
    let (back, sat, unsat) = backend_failures(CASES);
    let all: Vec<String> = [&cons, &pre, &mono, &prog, &back].into_iter().flatten().cloned().collect();
    let detail = format!(
        "{CASES} cases each: conservation {}, prefix {}, monotone {}, progress {} ({relevant} non-vacuous), \
         backends {} ({sat} SAT / {unsat} UNSAT){}",
        cons.len(),
        pre.len(),
        mono.len(),
        prog.len(),
        back.len(),
        first(&all)
    );
    Verdict::timed(Duration::from_secs(180), start, all.is_empty(), detail)
}
