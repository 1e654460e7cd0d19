//! Labeled samples `(word, n, label)` and the relations derived from them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::bp::{ActionId, BroadcastProtocol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error("entry {0} has n = 0; process counts start at 1")]
    ZeroProcesses(usize),
    #[error("contradiction: `{word}` is feasible with {positive} processes but infeasible with {negative}")]
    Contradiction { word: String, positive: u32, negative: u32, lines: (usize, usize) },
    #[error("similarity is not transitive: {0} ~ {1}, {1} ~ {2}, but {0} and {2} are apart")]
    NotTransitive(String, String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SampleEntry {
    pub word: Vec<String>,
    pub n: u32,
    pub label: bool,
}

impl SampleEntry {
    pub fn new<S: AsRef<str>>(word: &[S], n: u32, label: bool) -> Self {
        SampleEntry { word: word.iter().map(|s| s.as_ref().to_string()).collect(), n, label }
    }

    /// Parses the word from whitespace-separated action names.
    pub fn parse(word: &str, n: u32, label: bool) -> Self {
        SampleEntry { word: word.split_whitespace().map(str::to_string).collect(), n, label }
    }

    pub fn word_text(&self) -> String {
        self.word.join(" ")
    }
}

impl fmt::Display for SampleEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.word_text(), self.n, if self.label { "T" } else { "F" })
    }
}

/// A finite set of labeled triples. Construction rejects internal
/// contradictions: `(w, n, T)` together with `(w, n', F)` for `n' >= n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sample {
    entries: Vec<SampleEntry>,
}

/// Per-word extreme indices and the indexed families `P_i`, `N_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Indexed {
    pub positives: BTreeMap<u32, BTreeSet<Vec<String>>>,
    pub negatives: BTreeMap<u32, BTreeSet<Vec<String>>>,
    pub min_positive: BTreeMap<Vec<String>, u32>,
    pub max_negative: BTreeMap<Vec<String>, u32>,
}

impl Indexed {
    pub fn all_positive(&self) -> BTreeSet<Vec<String>> {
        self.min_positive.keys().cloned().collect()
    }
    pub fn all_negative(&self) -> BTreeSet<Vec<String>> {
        self.max_negative.keys().cloned().collect()
    }
}

/// What normalization dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizeReport {
    pub duplicates: usize,
    pub implied: usize,
}

impl Sample {
    pub fn new(entries: Vec<SampleEntry>) -> Result<Self, SampleError> {
        let s = Sample { entries };
        s.check()?;
        Ok(s)
    }

    pub fn empty() -> Self {
        Sample::default()
    }

    fn check(&self) -> Result<(), SampleError> {
        let mut min_pos: HashMap<&[String], (u32, usize)> = HashMap::new();
        let mut max_neg: HashMap<&[String], (u32, usize)> = HashMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            if e.n == 0 {
                return Err(SampleError::ZeroProcesses(i));
            }
            let (map, better): (_, fn(u32, u32) -> bool) = if e.label {
                (&mut min_pos, |new, old| new < old)
            } else {
                (&mut max_neg, |new, old| new > old)
            };
            match map.get(e.word.as_slice()) {
                Some(&(old, _)) if !better(e.n, old) => {}
                _ => {
                    map.insert(&e.word, (e.n, i));
                }
            }
        }
        // report the earliest offending word for deterministic messages
        let mut worst: Option<(usize, SampleError)> = None;
        for (w, &(p, pi)) in &min_pos {
            if let Some(&(q, qi)) = max_neg.get(w) {
                if q >= p {
                    let first = pi.min(qi);
                    if worst.as_ref().map_or(true, |(f, _)| first < *f) {
                        let err = SampleError::Contradiction {
                            word: w.join(" "),
                            positive: p,
                            negative: q,
                            lines: (pi, qi),
                        };
                        worst = Some((first, err));
                    }
                }
            }
        }
        match worst {
            Some((_, e)) => Err(e),
            None => Ok(()),
        }
    }

    pub fn entries(&self) -> &[SampleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of word lengths.
    pub fn size(&self) -> usize {
        self.entries.iter().map(|e| e.word.len()).sum()
    }

    /// Adds entries, re-checking for contradictions.
    pub fn extended(&self, more: impl IntoIterator<Item = SampleEntry>) -> Result<Sample, SampleError> {
        let mut entries = self.entries.clone();
        entries.extend(more);
        Sample::new(entries)
    }

    /// Actions occurring in at least one positive word, in order of first
    /// appearance.
    pub fn alphabet(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in self.entries.iter().filter(|e| e.label) {
            for a in &e.word {
                if seen.insert(a.as_str()) {
                    out.push(a.clone());
                }
            }
        }
        out
    }

    /// Every action name mentioned anywhere, in order of first appearance.
    pub fn all_actions(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for e in &self.entries {
            for a in &e.word {
                if seen.insert(a.as_str()) {
                    out.push(a.clone());
                }
            }
        }
        out
    }

    /// Indices of entries that disagree with `bp`. An action missing from
    /// the protocol is never enabled, so words using it are infeasible.
    pub fn violations(&self, bp: &BroadcastProtocol) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, e) in self.entries.iter().enumerate() {
            let ids: Option<Vec<ActionId>> = e.word.iter().map(|a| bp.action_id(a)).collect();
            let feasible = match ids {
                Some(w) => bp.feasible_unchecked(e.n, &w),
                None => false,
            };
            if feasible != e.label {
                out.push(i);
            }
        }
        out
    }

    pub fn consistent_with(&self, bp: &BroadcastProtocol) -> bool {
        self.violations(bp).is_empty()
    }

    pub fn indexed(&self) -> Indexed {
        let mut ix = Indexed::default();
        for e in &self.entries {
            if e.label {
                ix.positives.entry(e.n).or_default().insert(e.word.clone());
                let m = ix.min_positive.entry(e.word.clone()).or_insert(e.n);
                *m = (*m).min(e.n);
            } else {
                ix.negatives.entry(e.n).or_default().insert(e.word.clone());
                let m = ix.max_negative.entry(e.word.clone()).or_insert(e.n);
                *m = (*m).max(e.n);
            }
        }
        ix
    }

    /// All apart pairs over the alphabet, as a symmetric matrix indexed like
    /// [`Sample::alphabet`].
    pub fn apartness(&self) -> Vec<Vec<bool>> {
        let alpha = self.alphabet();
        let pos: HashMap<&str, usize> =
            alpha.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let k = alpha.len();
        let mut apart = vec![vec![false; k]; k];
        let ix = self.indexed();
        // prefix -> (last action -> min positive n), (last action -> max negative n)
        type Ext = BTreeMap<usize, u32>;
        let mut by_prefix: HashMap<&[String], (Ext, Ext)> = HashMap::new();
        for (w, &n) in &ix.min_positive {
            if let Some((last, prefix)) = w.split_last() {
                let a = pos[last.as_str()];
                let e = by_prefix.entry(prefix).or_default();
                let m = e.0.entry(a).or_insert(n);
                *m = (*m).min(n);
            }
        }
        for (w, &n) in &ix.max_negative {
            if let Some((last, prefix)) = w.split_last() {
                if let Some(&b) = pos.get(last.as_str()) {
                    let e = by_prefix.entry(prefix).or_default();
                    let m = e.1.entry(b).or_insert(n);
                    *m = (*m).max(n);
                }
            }
        }
        for (p, n) in by_prefix.values() {
            for (&a, &np) in p {
                for (&b, &nn) in n {
                    if nn >= np && a != b {
                        apart[a][b] = true;
                        apart[b][a] = true;
                    }
                }
            }
        }
        apart
    }

    /// `a` and `b` are apart when some `w` has `(wa, n, T)` and `(wb, n', F)`
    /// with `n' >= n`, or the same with the roles swapped.
    pub fn apart(&self, a: &str, b: &str) -> bool {
        let alpha = self.alphabet();
        let (Some(i), Some(j)) =
            (alpha.iter().position(|x| x == a), alpha.iter().position(|x| x == b))
        else {
            return false;
        };
        self.apartness()[i][j]
    }

    /// Classes of the complement of apartness, when it is an equivalence.
    pub fn similarity_partition(&self) -> Result<Vec<Vec<String>>, SampleError> {
        let alpha = self.alphabet();
        let apart = self.apartness();
        let k = alpha.len();
        for b in 0..k {
            for a in 0..k {
                if a == b || apart[a][b] {
                    continue;
                }
                for c in 0..k {
                    if c != b && !apart[b][c] && apart[a][c] {
                        return Err(SampleError::NotTransitive(
                            alpha[a].clone(),
                            alpha[b].clone(),
                            alpha[c].clone(),
                        ));
                    }
                }
            }
        }
        let mut class_of: Vec<Option<usize>> = vec![None; k];
        let mut classes: Vec<Vec<String>> = Vec::new();
        for a in 0..k {
            if class_of[a].is_some() {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for b in a..k {
                if class_of[b].is_none() && !apart[a][b] {
                    class_of[b] = Some(id);
                    members.push(alpha[b].clone());
                }
            }
            classes.push(members);
        }
        Ok(classes)
    }

    /// Drops duplicates and entries implied by monotonicity in `n`: only the
    /// smallest positive and the largest negative count per word are kept.
    pub fn normalize(&self) -> Result<(Sample, NormalizeReport), SampleError> {
        self.check()?;
        let ix = self.indexed();
        let mut kept = Vec::new();
        let mut seen = BTreeSet::new();
        let mut report = NormalizeReport::default();
        for e in &self.entries {
            let extreme = if e.label {
                ix.min_positive[&e.word] == e.n
            } else {
                ix.max_negative[&e.word] == e.n
            };
            if !extreme {
                report.implied += 1;
            } else if !seen.insert((e.word.clone(), e.label)) {
                report.duplicates += 1;
            } else {
                kept.push(e.clone());
            }
        }
        Ok((Sample { entries: kept }, report))
    }
}
