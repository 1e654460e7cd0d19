//! SMT-LIB 2 rendering of a constraint program, for external solvers.

use std::fmt::Write as _;

use super::constraints::{ConstraintProgram, Family, Formula, Term};

fn term(out: &mut String, p: &ConstraintProgram, t: &Term) {
    match t {
        Term::Init => out.push_str("s0"),
        Term::State(s) => {
            let _ = write!(out, "q{s}");
        }
        Term::St(a) => {
            let _ = write!(out, "(f_st act{a})");
        }
        Term::Bang(a) => {
            let _ = write!(out, "(f_bang act{a})");
        }
        Term::Resp(a, inner) => {
            let _ = write!(out, "(f_resp act{a} ");
            term(out, p, inner);
            out.push(')');
        }
        Term::Var(v) => out.push_str(&p.var_names[*v]),
    }
}

fn formula(out: &mut String, p: &ConstraintProgram, f: &Formula) {
    let list = |out: &mut String, op: &str, fs: &[Formula], empty: &str| {
        match fs {
            [] => out.push_str(empty),
            [one] => formula(out, p, one),
            _ => {
                let _ = write!(out, "({op}");
                for g in fs {
                    out.push(' ');
                    formula(out, p, g);
                }
                out.push(')');
            }
        }
    };
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Eq(x, y) | Formula::Ne(x, y) => {
            out.push_str(if matches!(f, Formula::Eq(..)) { "(= " } else { "(distinct " });
            term(out, p, x);
            out.push(' ');
            term(out, p, y);
            out.push(')');
        }
        Formula::And(fs) => list(out, "and", fs, "true"),
        Formula::Or(fs) => list(out, "or", fs, "false"),
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Separation => "separation",
        Family::NoHiddenStates => "no-hidden-states",
        Family::FirstLetter => "first-letter",
        Family::SingleProcess => "single-process-run",
        Family::MultiProcess => "multi-process-run",
    }
}

/// States become constructors `q0..`, actions `act0..` (names listed in
/// comments), the word-position variables plain constants.
pub fn export_constraints(p: &ConstraintProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "; {} states, {} action symbols", p.k, p.action_symbols.len());
    for (i, a) in p.action_symbols.iter().enumerate() {
        let _ = writeln!(out, "; act{i} = {a}");
    }
    out.push_str("(set-logic ALL)\n");
    out.push_str("(declare-datatype State (");
    for s in 0..p.k {
        let _ = write!(out, "{}(q{s})", if s > 0 { " " } else { "" });
    }
    out.push_str("))\n(declare-datatype Action (");
    for i in 0..p.action_symbols.len() {
        let _ = write!(out, "{}(act{i})", if i > 0 { " " } else { "" });
    }
    out.push_str("))\n");
    out.push_str("(declare-const s0 State)\n");
    out.push_str("(declare-fun f_st (Action) State)\n");
    out.push_str("(declare-fun f_bang (Action) State)\n");
    out.push_str("(declare-fun f_resp (Action State) State)\n");
    for v in &p.var_names {
        let _ = writeln!(out, "(declare-const {v} State)");
    }
    for a in &p.assertions {
        let _ = write!(out, "; {}: {}", family_name(a.family), a.note);
        if let Some(e) = a.entry {
            let _ = write!(out, " [entry {e}]");
        }
        out.push_str("\n(assert ");
        formula(&mut out, p, &a.formula);
        out.push_str(")\n");
    }
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::constraints::{build_constraints, ProgramOptions};
    use crate::sample::{Sample, SampleEntry};

    #[test]
    fn shape_of_export() {
        let x = Sample::new(vec![SampleEntry::parse("a", 1, true), SampleEntry::parse("b", 1, false)]).unwrap();
        let p = build_constraints(&x, 2, ProgramOptions { fresh: 1, ..Default::default() }).unwrap();
        let text = export_constraints(&p);
        assert!(text.contains("(declare-datatype State ((q0) (q1)))"));
        assert!(text.contains("(declare-datatype Action ((act0) (act1)))"));
        assert!(text.contains("; act0 = a\n"));
        assert!(text.contains("(assert (or (= (f_st act0) q1) (= (f_st act1) q1)))"));
        assert!(text.ends_with("(check-sat)\n(get-model)\n"));
        let opens = text.lines().filter(|l| !l.starts_with(';')).flat_map(|l| l.chars()).filter(|&c| c == '(').count();
        let closes = text.lines().filter(|l| !l.starts_with(';')).flat_map(|l| l.chars()).filter(|&c| c == ')').count();
        assert_eq!(opens, closes);
    }
}
