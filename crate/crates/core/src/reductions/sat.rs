use crate::bp::BroadcastProtocol;
use crate::sample::{Sample, SampleEntry};

use super::{Builder, ReductionError};

/// CNF with three literals per clause, each clause all positive or all
/// negative. Literals are DIMACS-style: `v` or `-v` for variable `v >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllEq3Cnf {
    vars: usize,
    clauses: Vec<[i64; 3]>,
}

impl AllEq3Cnf {
    pub fn new(vars: usize, clauses: Vec<[i64; 3]>) -> Result<Self, ReductionError> {
        if clauses.is_empty() {
            return Err(ReductionError::BadParameter("formula has no clauses".into()));
        }
        for (c, lits) in clauses.iter().enumerate() {
            for &l in lits {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(ReductionError::VariableOutOfRange { clause: c + 1, var: l, vars });
                }
            }
            if !(lits.iter().all(|&l| l > 0) || lits.iter().all(|&l| l < 0)) {
                return Err(ReductionError::MixedPolarity(c + 1));
            }
        }
        Ok(AllEq3Cnf { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[i64; 3]] {
        &self.clauses
    }

    pub fn is_positive(&self, clause: usize) -> bool {
        self.clauses[clause][0] > 0
    }

    fn mentions(&self, clause: usize, var: usize) -> bool {
        self.clauses[clause].iter().any(|l| l.unsigned_abs() as usize == var)
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// Brute force over all assignments; for tests on tiny formulas.
    pub fn satisfying_assignments(&self) -> Vec<Vec<bool>> {
        assert!(self.vars < 20, "brute force only for tiny formulas");
        (0u32..1 << self.vars)
            .map(|bits| (0..self.vars).map(|v| bits >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|a| self.first_unsatisfied(a).is_none())
            .collect()
    }
}

fn chain(from: usize, to: usize) -> impl Iterator<Item = String> {
    (from..=to).map(|i| format!("a_{i}"))
}

/// The sample and the state bound `n + m + 4` for `n` variables and `m`
/// clauses. Clause `C_i` is addressed by the prefix `a_1 .. a_{i-1}`, the
/// word that leads a process to the state of that clause.
pub fn alleq3sat_to_sample(phi: &AllEq3Cnf) -> Result<(Sample, usize), ReductionError> {
    let (n, m) = (phi.vars, phi.clauses.len());
    let total = m + n;
    let mut out = Vec::new();
    let mut add = |w: Vec<String>, procs: u32, label: bool| out.push(SampleEntry::new(&w, procs, label));
    let pre = |i: usize| -> Vec<String> { chain(1, i).collect() };
    let cat = |parts: &[&[String]]| -> Vec<String> { parts.concat() };
    let s = |t: &str| vec![t.to_string()];

    // feasible with one process
    add(cat(&[&pre(total), &s("a"), &s("a")]), 1, true);
    add(vec!["b".into(), "c".into(), "c".into()], 1, true);
    // feasible with two
    for i in 1..=m {
        let v = if phi.is_positive(i - 1) { "t" } else { "f" };
        add(cat(&[&pre(i - 1), &s("b"), &s("c"), &s(v), &s(v)]), 2, true);
    }
    // infeasible with one
    for i in 1..total {
        for j in 1..=total {
            if j != i + 1 {
                add(cat(&[&pre(i), &s(&format!("a_{j}"))]), 1, false);
            }
        }
    }
    for w in ["a", "b a", "b b", "c", "t", "f", "b c a", "b c t", "b c f"] {
        add(w.split(' ').map(String::from).collect(), 1, false);
    }
    // infeasible with two
    for i in 0..=m {
        for j in i.max(1)..=m {
            add(cat(&[&pre(i), &s("b"), &chain(j, total).collect::<Vec<_>>()]), 2, false);
        }
    }
    for i in 1..=m {
        for v in 1..=n {
            if !phi.mentions(i - 1, v) {
                add(cat(&[&pre(i - 1), &s("b"), &chain(m + v, total).collect::<Vec<_>>()]), 2, false);
            }
        }
        add(cat(&[&pre(i - 1), &s("b"), &s("c"), &s("t"), &s("f")]), 2, false);
        add(cat(&[&pre(i - 1), &s("b"), &s("c"), &s("f"), &s("t")]), 2, false);
    }
    for i in 1..=total {
        for x in ["c", "t", "f"] {
            add(cat(&[&pre(i), &s(x)]), 2, false);
        }
    }
    for i in 1..total {
        add(cat(&[&pre(i), &s("a")]), 2, false);
    }
    for i in 0..=m {
        for j in m..total {
            for k in j..total {
                add(cat(&[&pre(i), &s("b"), &chain(j + 1, k).collect::<Vec<_>>(), &s("a")]), 2, false);
            }
        }
    }
    Ok((Sample::new(out)?, n + m + 4))
}

/// Protocol with one state per clause and per variable, plus `T`, `F`, `c`
/// and `a`. `b??` moves each clause state to a variable satisfying it and
/// `c??` moves each variable state to its value.
pub fn assignment_to_bp(phi: &AllEq3Cnf, assignment: &[bool]) -> Result<BroadcastProtocol, ReductionError> {
    let (n, m) = (phi.vars, phi.clauses.len());
    if assignment.len() != n {
        return Err(ReductionError::BadParameter(format!("expected {n} values, got {}", assignment.len())));
    }
    if let Some(c) = phi.first_unsatisfied(assignment) {
        return Err(ReductionError::AssignmentDoesNotSatisfy(c + 1));
    }
    let mut b = Builder::default();
    let clause: Vec<usize> = (1..=m).map(|i| b.state(format!("{i}")).unwrap()).collect();
    let var: Vec<usize> = (1..=n).map(|j| b.state(format!("{j}'")).unwrap()).collect();
    let st = b.state("T")?;
    let sf = b.state("F")?;
    let sc = b.state("c")?;
    let sa = b.state("a")?;
    let path: Vec<usize> = clause.iter().chain(&var).copied().chain([sa]).collect();
    for i in 0..m + n {
        b.action(format!("a_{}", i + 1), path[i], path[i + 1])?;
    }
    b.action("a", sa, sa)?;
    let ab = b.action("b", clause[0], sc)?;
    for (i, lits) in phi.clauses.iter().enumerate() {
        let lit = lits
            .iter()
            .find(|&&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
            .expect("clause satisfied");
        b.respond(ab, clause[i], var[lit.unsigned_abs() as usize - 1]);
    }
    let ac = b.action("c", sc, sc)?;
    for (j, &v) in assignment.iter().enumerate() {
        b.respond(ac, var[j], if v { st } else { sf });
    }
    b.action("t", st, st)?;
    b.action("f", sf, sf)?;
    Ok(b.build(clause[0]))
}
