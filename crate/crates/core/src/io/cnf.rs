//! DIMACS clauses restricted to three literals per clause, all of one
//! polarity. `c` lines are comments; the `p cnf <vars> <clauses>` header is
//! required and its clause count is checked.

use super::FormatError;
use crate::reductions::AllEq3Cnf;

pub fn parse_cnf(text: &str) -> Result<AllEq3Cnf, FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<[i64; 3]> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut start = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let bad = |message: String| FormatError::Line { line, message };
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let f: Vec<&str> = t.split_whitespace().collect();
            if header.is_some() {
                return Err(bad("second header".into()));
            }
            if f.len() != 4 || f[1] != "cnf" {
                return Err(bad("header must read `p cnf <vars> <clauses>`".into()));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("`{s}` is not a count")));
            header = Some((num(f[2])?, num(f[3])?, line));
            continue;
        }
        let Some((vars, _, _)) = header else {
            return Err(bad("clause before the `p cnf` header".into()));
        };
        for tok in t.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| bad(format!("`{tok}` is not a literal")))?;
            if current.is_empty() {
                start = line;
            }
            if lit != 0 {
                if lit.unsigned_abs() as usize > vars {
                    return Err(bad(format!("literal {lit} exceeds {vars} variables")));
                }
                current.push(lit);
                continue;
            }
            if current.len() != 3 {
                return Err(FormatError::Line { line: start, message: format!("clause has {} literals, expected 3", current.len()) });
            }
            if !(current.iter().all(|&l| l > 0) || current.iter().all(|&l| l < 0)) {
                return Err(FormatError::MixedPolarity { line: start });
            }
            clauses.push([current[0], current[1], current[2]]);
            current.clear();
        }
    }
    let Some((vars, count, hline)) = header else {
        return Err(FormatError::Line { line: 1, message: "missing `p cnf` header".into() });
    };
    if !current.is_empty() {
        return Err(FormatError::Line { line: start, message: "clause is not terminated by 0".into() });
    }
    if clauses.len() != count {
        return Err(FormatError::Line { line: hline, message: format!("header announces {count} clauses, found {}", clauses.len()) });
    }
    Ok(AllEq3Cnf::new(vars, clauses)?)
}

pub fn serialize_cnf(phi: &AllEq3Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", phi.vars(), phi.clauses().len());
    for c in phi.clauses() {
        out.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "c two clauses\np cnf 4 2\n1 2 3 0\n-2 -3\n-4 0\n";
        let phi = parse_cnf(text).unwrap();
        assert_eq!(phi.clauses(), &[[1, 2, 3], [-2, -3, -4]]);
        assert_eq!(parse_cnf(&serialize_cnf(&phi)).unwrap(), phi);
    }

    #[test]
    fn mixed_polarity_rejected_with_line() {
        assert_eq!(parse_cnf("p cnf 3 1\n\n1 -2 3 0\n").unwrap_err(), FormatError::MixedPolarity { line: 3 });
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(parse_cnf("p cnf 3 1\n1 2 0\n"), Err(FormatError::Line { line: 2, .. })));
        assert!(matches!(parse_cnf("p cnf 3 2\n1 2 3 0\n"), Err(FormatError::Line { line: 1, .. })));
        assert!(matches!(parse_cnf("1 2 3 0\n"), Err(FormatError::Line { line: 1, .. })));
        assert!(matches!(parse_cnf("p cnf 2 1\n1 2 3 0\n"), Err(FormatError::Line { line: 2, .. })));
    }
}
