mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bplearn::bp::{random_protocol, BroadcastProtocol};
use common::*;

fn bp_strategy(max_states: usize, max_actions: usize) -> impl Strategy<Value = BroadcastProtocol> {
    (any::<u64>(), 1..=max_states, 0..=max_actions).prop_map(move |(seed, states, extra)| {
        let actions = states.max(extra.min(max_actions));
        random_protocol(&mut ChaCha8Rng::seed_from_u64(seed), states, actions)
    })
}

#[test]
fn steps_conserve_processes() {
    let bad = conservation_failures(CASES);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn languages_are_prefix_closed() {
    let bad = prefix_failures(CASES);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn more_processes_never_lose_words() {
    let bad = monotonicity_failures(CASES);
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn one_more_process_suffices() {
    let (bad, relevant) = progress_failures(CASES);
    assert!(bad.is_empty(), "{bad:?}");
    assert!(relevant >= 50, "only {relevant} cases met the hypothesis");
}

#[test]
fn native_search_agrees_with_evaluator() {
    let (bad, sat, unsat) = backend_failures(CASES);
    assert!(bad.is_empty(), "{bad:?}");
    assert!(sat > 100 && unsat > 100, "{sat} SAT, {unsat} UNSAT");
}

fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut start = 0;
    for _ in 0..max_len {
        let end = out.len();
        for i in start..end {
            for a in 0..k {
                let mut w = out[i].clone();
                w.push(a);
                out.push(w);
            }
        }
        start = end;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn runs_are_deterministic(bp in bp_strategy(4, 5), seed in any::<u64>(), n in 1u32..6) {
        let w = random_word(&mut ChaCha8Rng::seed_from_u64(seed), &bp, n, 8);
        prop_assert_eq!(bp.run(n, &w).unwrap(), bp.run(n, &w).unwrap());
    }

    #[test]
    fn enumeration_matches_filter(bp in bp_strategy(3, 3), n in 1u32..=3, max_len in 0usize..=5) {
        let got = bp.enumerate_language(n, max_len, 1_000_000).unwrap();
        let want: BTreeSet<Vec<usize>> = all_words(bp.num_actions(), max_len)
            .into_iter()
            .filter(|w| bp.feasible(n, w).unwrap())
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn cutoff_holds_beyond(bp in bp_strategy(3, 3)) {
        if let Some(k) = bp.detect_cutoff(5, 1_000_000).unwrap() {
            let base = bp.enumerate_language(k, 8, 1_000_000).unwrap();
            for later in k + 1..=k + 3 {
                prop_assert_eq!(&base, &bp.enumerate_language(later, 8, 1_000_000).unwrap(), "n = {}", later);
            }
        }
    }
}
