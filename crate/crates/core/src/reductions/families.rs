//! Two protocol families where `a_top` needs many processes and long words:
//! loops of coprime lengths have to line up before it becomes enabled.
//!
//! Names are ASCII: `bot`/`top` for the sink and goal states, `a_top` for
//! the goal action, and `b_<state>` for padding actions on states that
//! would otherwise send nothing.

use crate::bp::BroadcastProtocol;

use super::{Builder, ReductionError};

pub const PAD_PREFIX: &str = "b_";

pub fn primes_up_to(n: usize) -> Vec<usize> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// Left loop `1'..n'`, right loop `1..m`, helpers `h1..hl`, plus `i1`,
/// `i2`, `bot`, `top`. Each pass of the left loop costs one process per
/// `a_j` and one helper step; the right loop advances on every `a_j` and
/// helper action, and `c` from `n'` reaches `top` only when the right loop
/// sits at `m`. A helper step taken while the left processes are not at
/// `n'` sends them to `bot`, so helpers cannot advance the right loop on
/// their own.
pub fn family_quadratic(m: usize, n: usize, l: usize) -> Result<BroadcastProtocol, ReductionError> {
    if m < 2 || n < 2 || l < 1 {
        return Err(ReductionError::BadParameter(format!("need m, n >= 2 and l >= 1, got m={m} n={n} l={l}")));
    }
    let mut b = Builder::default();
    let i1 = b.state("i1")?;
    let i2 = b.state("i2")?;
    let left: Vec<usize> = (1..=n).map(|j| b.state(format!("{j}'"))).collect::<Result<_, _>>()?;
    let right: Vec<usize> = (1..=m).map(|j| b.state(format!("{j}"))).collect::<Result<_, _>>()?;
    let help: Vec<usize> = (1..=l).map(|j| b.state(format!("h{j}"))).collect::<Result<_, _>>()?;
    let bot = b.state("bot")?;
    let top = b.state("top")?;
    let total = b.num_states();

    let a = b.action("i1", i1, right[0])?;
    b.respond(a, i1, i2);
    let a = b.action("i2", i2, help[0])?;
    b.respond(a, i2, left[0]);
    let advance_right = |b: &mut Builder, a: usize| {
        for j in 0..m {
            b.respond(a, right[j], right[(j + 1) % m]);
        }
    };
    for j in 0..n - 1 {
        let a = b.action(format!("a{}", j + 1), left[j], bot)?;
        b.respond(a, left[j], left[j + 1]);
        advance_right(&mut b, a);
    }
    for j in 0..l {
        let a = b.action(format!("h{}", j + 1), help[j], if j + 1 < l { help[j + 1] } else { bot })?;
        for &s in &left[..n - 1] {
            b.respond(a, s, bot);
        }
        b.respond(a, left[n - 1], left[0]);
        advance_right(&mut b, a);
    }
    let c = b.action("c", left[n - 1], bot)?;
    for s in 0..total {
        b.respond(c, s, if s == right[m - 1] { top } else { bot });
    }
    for j in 0..m {
        b.action(format!("b{}", j + 1), right[j], right[j])?;
    }
    let at = b.action("a_top", top, top)?;
    for s in 0..total {
        b.respond(at, s, top);
    }
    Ok(b.build(i1).with_padding(PAD_PREFIX))
}

fn ticks(j: usize) -> String {
    "'".repeat(j)
}

/// One loop per prime `p <= n`. The largest loop sends `a_j` (each use
/// costs a process) and can only be closed by a helper action (which sends
/// its processes to `bot` anywhere but at the loop's end, and kills any
/// initialization still in progress); the smaller
/// loops advance on every `a_j` and helper action. Helper chains have the
/// lengths of the smaller primes, and a chain's last state is reset to its
/// first by the actions of chains for smaller primes, so the helpers count
/// in mixed radix. `c` from the end of the largest loop moves the ends of
/// the small loops to the terminal chain and everything else to `bot`;
/// `top` is reached only if every small loop was at its end at that moment.
///
/// Loop `j` (1-based) uses state names `1..p_j` followed by `j - 1`
/// apostrophes; the helper chain for the second largest prime is `h_1..`,
/// the next `h'_1..`, and so on.
pub fn family_exponential(n: usize) -> Result<BroadcastProtocol, ReductionError> {
    let ps = primes_up_to(n);
    let k = ps.len();
    if k < 2 {
        return Err(ReductionError::BadParameter(format!("need at least two primes up to n, got n={n}")));
    }
    let mut b = Builder::default();
    let inits: Vec<usize> = (0..2 * (k - 1)).map(|j| b.state(format!("i{j}"))).collect::<Result<_, _>>()?;
    let mut loops: Vec<Vec<usize>> = Vec::new();
    for (j, &p) in ps.iter().enumerate() {
        loops.push((1..=p).map(|t| b.state(format!("{t}{}", ticks(j)))).collect::<Result<_, _>>()?);
    }
    let chain_name = |c: usize, t: usize| format!("h{}_{t}", ticks(k - 2 - c));
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for (c, &p) in ps[..k - 1].iter().enumerate() {
        chains.push((1..=p).map(|t| b.state(chain_name(c, t))).collect::<Result<_, _>>()?);
    }
    let term_name = |t: usize| if k == 3 { "d".to_string() } else { format!("d_{t}") };
    let term: Vec<usize> = (1..=k - 2).map(|t| b.state(term_name(t))).collect::<Result<_, _>>()?;
    let bot = b.state("bot")?;
    let top = b.state("top")?;
    let total = b.num_states();
    let big = &loops[k - 1];
    let small = &loops[..k - 1];

    for j in 0..inits.len() {
        let t = j / 2;
        let target = if j % 2 == 0 { small[t][0] } else { chains[k - 2 - t][0] };
        let a = b.action(format!("i{j}"), inits[j], target)?;
        b.respond(a, inits[j], if j + 1 < inits.len() { inits[j + 1] } else { big[0] });
    }
    let advance_small = |b: &mut Builder, a: usize| {
        for lp in small {
            for t in 0..lp.len() {
                b.respond(a, lp[t], lp[(t + 1) % lp.len()]);
            }
        }
    };
    for t in 0..big.len() - 1 {
        let a = b.action(format!("a_{}", t + 1), big[t], bot)?;
        b.respond(a, big[t], big[t + 1]);
        advance_small(&mut b, a);
    }
    for (c, chain) in chains.iter().enumerate() {
        for t in 0..chain.len() {
            let to = if t + 1 < chain.len() { chain[t + 1] } else { bot };
            let a = b.action(chain_name(c, t + 1), chain[t], to)?;
            for &s in inits.iter().chain(&big[..big.len() - 1]) {
                b.respond(a, s, bot);
            }
            b.respond(a, big[big.len() - 1], big[0]);
            advance_small(&mut b, a);
            for higher in &chains[c + 1..] {
                b.respond(a, higher[higher.len() - 1], higher[0]);
            }
        }
    }
    let c = b.action("c", big[big.len() - 1], bot)?;
    let first_goal = term.first().copied().unwrap_or(top);
    for s in 0..total {
        let to = if small.iter().any(|lp| lp[lp.len() - 1] == s) { first_goal } else { bot };
        b.respond(c, s, to);
    }
    for t in 0..term.len() {
        let a = b.action(term_name(t + 1), term[t], bot)?;
        b.respond(a, term[t], if t + 1 < term.len() { term[t + 1] } else { top });
    }
    b.action("a_top", top, top)?;
    Ok(b.build(inits[0]).with_padding(PAD_PREFIX))
}

/// The five-prime-bound member written out transition by transition.
pub fn exponential_fixture_p5() -> BroadcastProtocol {
    let mut b = Builder::default();
    let st = |b: &mut Builder, n: &str| b.state(n).unwrap();
    let i: Vec<usize> = ["i0", "i1", "i2", "i3"].iter().map(|n| st(&mut b, n)).collect();
    let l2: Vec<usize> = ["1", "2"].iter().map(|n| st(&mut b, n)).collect();
    let l3: Vec<usize> = ["1'", "2'", "3'"].iter().map(|n| st(&mut b, n)).collect();
    let l5: Vec<usize> = ["1''", "2''", "3''", "4''", "5''"].iter().map(|n| st(&mut b, n)).collect();
    let hp: Vec<usize> = ["h'_1", "h'_2"].iter().map(|n| st(&mut b, n)).collect();
    let h: Vec<usize> = ["h_1", "h_2", "h_3"].iter().map(|n| st(&mut b, n)).collect();
    let d = st(&mut b, "d");
    let bot = st(&mut b, "bot");
    let top = st(&mut b, "top");
    let total = b.num_states();

    let act = |b: &mut Builder, name: &str, from: usize, to: usize| b.action(name, from, to).unwrap();
    let a = act(&mut b, "i0", i[0], l2[0]);
    b.respond(a, i[0], i[1]);
    let a = act(&mut b, "i1", i[1], h[0]);
    b.respond(a, i[1], i[2]);
    let a = act(&mut b, "i2", i[2], l3[0]);
    b.respond(a, i[2], i[3]);
    let a = act(&mut b, "i3", i[3], hp[0]);
    b.respond(a, i[3], l5[0]);
    let closing = |b: &mut Builder, a: usize| {
        for &s in i.iter().chain(&l5[..4]) {
            b.respond(a, s, bot);
        }
        b.respond(a, l5[4], l5[0]);
    };
    let small = |b: &mut Builder, a: usize| {
        b.respond(a, l2[0], l2[1]);
        b.respond(a, l2[1], l2[0]);
        b.respond(a, l3[0], l3[1]);
        b.respond(a, l3[1], l3[2]);
        b.respond(a, l3[2], l3[0]);
    };
    for t in 0..4 {
        let a = act(&mut b, &format!("a_{}", t + 1), l5[t], bot);
        b.respond(a, l5[t], l5[t + 1]);
        small(&mut b, a);
    }
    // H' actions also reset h_3
    for (t, to) in [(0, hp[1]), (1, bot)] {
        let a = act(&mut b, &format!("h'_{}", t + 1), hp[t], to);
        closing(&mut b, a);
        b.respond(a, h[2], h[0]);
        small(&mut b, a);
    }
    for (t, to) in [(0, h[1]), (1, h[2]), (2, bot)] {
        let a = act(&mut b, &format!("h_{}", t + 1), h[t], to);
        closing(&mut b, a);
        small(&mut b, a);
    }
    let c = act(&mut b, "c", l5[4], bot);
    for s in 0..total {
        b.respond(c, s, if s == l2[1] || s == l3[2] { d } else { bot });
    }
    let a = act(&mut b, "d", d, bot);
    b.respond(a, d, top);
    act(&mut b, "a_top", top, top);
    b.build(i[0]).with_padding(PAD_PREFIX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::same_up_to_order;

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(12), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn quadratic_sizes() {
        let bp = family_quadratic(2, 2, 1).unwrap();
        assert_eq!(bp.num_states(), 9);
        assert!(bp.validate().is_empty());
        assert!(family_quadratic(1, 2, 1).is_err());
    }

    #[test]
    fn quadratic_small_instance() {
        let bp = family_quadratic(3, 2, 6).unwrap();
        let at = bp.action_id("a_top").unwrap();
        let (n, w) = bp.min_processes_for_action(at, 10, 1_000_000).unwrap().unwrap();
        assert_eq!(n, 6);
        assert!(w.len() >= 6);
    }

    #[test]
    fn p5_matches_fixture() {
        let gen = family_exponential(5).unwrap();
        let fix = exponential_fixture_p5();
        assert!(fix.validate().is_empty());
        assert!(same_up_to_order(&gen, &fix));
        assert!(same_up_to_order(&family_exponential(6).unwrap(), &fix));
    }

    #[test]
    fn p3_structure() {
        let bp = family_exponential(3).unwrap();
        assert!(bp.validate().is_empty());
        let names = bp.state_names().join(" ");
        assert_eq!(names, "i0 i1 1 2 1' 2' 3' h_1 h_2 bot top");
        let at = bp.action_id("a_top").unwrap();
        let (n, w) = bp.min_processes_for_action(at, 12, 1_000_000).unwrap().unwrap();
        assert_eq!(n, 7);
        assert_eq!(bp.format_word(&w), "i0 i1 a_1 a_2 h_1 a_1 a_2 c a_top");
        assert!(w.len() >= 6);
    }
}
