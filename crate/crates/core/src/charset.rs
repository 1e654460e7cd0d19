//! Characteristic-set generation by iterated exploration trees.
//!
//! Tree `T_i` holds words annotated with the configuration they reach in the
//! `i`-process system (or `BOT` when infeasible). Each level re-annotates the
//! previous tree and then expands it; a node whose configuration repeats one of
//! its ancestors gets children, but those children are not developed further.
//! The sequence stops once two consecutive trees have the same shape.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::bp::{ActionId, BroadcastProtocol, Configuration, RunOutcome, Word};
use crate::sample::{Sample, SampleEntry};

pub const DEFAULT_LEVEL_CAP: u32 = 16;
pub const DEFAULT_NODE_CAP: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharsetError {
    #[error("tree exceeded {0} nodes")]
    NodeBudget(usize),
    #[error("no fixpoint up to level {0}; the protocol may lack a small cutoff")]
    NoFixpointWithinCap(u32),
    #[error("tree was built for another protocol")]
    ProtocolMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Annotation {
    Reached(Configuration),
    Bottom,
}

impl Annotation {
    pub fn is_positive(&self) -> bool {
        matches!(self, Annotation::Reached(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub word: Word,
    pub annotation: Annotation,
    children: Option<Vec<usize>>,
    parent: Option<usize>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct ExplorationTree {
    level: u32,
    num_actions: usize,
    nodes: Vec<TreeNode>,
    index: HashMap<Word, usize>,
}

impl ExplorationTree {
    /// `T_0`: the root, annotated with the all-zero vector.
    pub fn initial(bp: &BroadcastProtocol) -> Self {
        let root = TreeNode {
            word: Vec::new(),
            annotation: Annotation::Reached(bp.initial_configuration(0)),
            children: None,
            parent: None,
        };
        ExplorationTree {
            level: 0,
            num_actions: bp.num_actions(),
            nodes: vec![root],
            index: HashMap::from([(Vec::new(), 0)]),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, w: &[ActionId]) -> Option<&TreeNode> {
        self.index.get(w).map(|&i| &self.nodes[i])
    }

    /// Shape comparison; annotations are ignored.
    pub fn same_shape(&self, other: &ExplorationTree) -> bool {
        self.nodes.len() == other.nodes.len()
            && self.nodes.iter().all(|n| {
                other.node(&n.word).is_some_and(|m| m.is_leaf() == n.is_leaf())
            })
    }

    /// One line per node: `word<TAB>annotation`, `BOT` for infeasible words.
    pub fn dump(&self, bp: &BroadcastProtocol) -> String {
        let mut order: Vec<&TreeNode> = self.nodes.iter().collect();
        order.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then(a.word.cmp(&b.word)));
        let mut out = String::new();
        for n in order {
            let ann = match &n.annotation {
                Annotation::Reached(c) => c.to_string(),
                Annotation::Bottom => "BOT".to_string(),
            };
            let _ = writeln!(out, "{}\t{}", bp.format_word(&n.word), ann);
        }
        out
    }

    fn add_child(&mut self, bp: &BroadcastProtocol, parent: usize, a: ActionId, cap: usize) -> Result<usize, CharsetError> {
        if self.nodes.len() >= cap {
            return Err(CharsetError::NodeBudget(cap));
        }
        let mut word = self.nodes[parent].word.clone();
        word.push(a);
        let annotation = annotate(bp, self.level, &word);
        let id = self.nodes.len();
        self.index.insert(word.clone(), id);
        self.nodes.push(TreeNode { word, annotation, children: None, parent: Some(parent) });
        Ok(id)
    }
}

fn annotate(bp: &BroadcastProtocol, n: u32, w: &[ActionId]) -> Annotation {
    match bp.run(n, w).expect("tree words use protocol actions") {
        RunOutcome::Completed(c) => Annotation::Reached(c),
        RunOutcome::Blocked { .. } => Annotation::Bottom,
    }
}

/// Builds `T_{i+1}` from `T_i`: re-annotate every node, then expand.
pub fn advance_tree(
    bp: &BroadcastProtocol,
    t: &ExplorationTree,
    node_cap: usize,
) -> Result<ExplorationTree, CharsetError> {
    if t.num_actions != bp.num_actions() {
        return Err(CharsetError::ProtocolMismatch);
    }
    let mut next = t.clone();
    next.level = t.level + 1;
    for node in &mut next.nodes {
        node.annotation = annotate(bp, next.level, &node.word);
    }
    // Depth-first walk with the multiset of ancestor configurations.
    let mut ancestors: HashMap<Configuration, usize> = HashMap::new();
    enum Ev {
        Enter(usize, bool),
        Exit(usize),
    }
    let mut stack = vec![Ev::Enter(0, false)];
    while let Some(ev) = stack.pop() {
        match ev {
            Ev::Enter(id, parent_repeats) => {
                let Annotation::Reached(conf) = next.nodes[id].annotation.clone() else {
                    continue;
                };
                let repeats = ancestors.contains_key(&conf);
                if next.nodes[id].children.is_none() && !parent_repeats {
                    let mut kids = Vec::with_capacity(bp.num_actions());
                    for a in 0..bp.num_actions() {
                        kids.push(next.add_child(bp, id, a, node_cap)?);
                    }
                    next.nodes[id].children = Some(kids);
                }
                *ancestors.entry(conf).or_insert(0) += 1;
                stack.push(Ev::Exit(id));
                if let Some(kids) = &next.nodes[id].children {
                    for &k in kids.iter().rev() {
                        stack.push(Ev::Enter(k, repeats));
                    }
                }
            }
            Ev::Exit(id) => {
                if let Annotation::Reached(conf) = &next.nodes[id].annotation {
                    let c = ancestors.get_mut(conf).expect("entered before");
                    *c -= 1;
                    if *c == 0 {
                        ancestors.remove(conf);
                    }
                }
            }
        }
    }
    Ok(next)
}

pub fn trees_equal(t1: &ExplorationTree, t2: &ExplorationTree) -> bool {
    t1.same_shape(t2)
}

/// `T_0, T_1, ..., T_{i+1}` where `T_{i+1}` is the first repeat of shape.
pub fn tree_sequence(
    bp: &BroadcastProtocol,
    level_cap: u32,
    node_cap: usize,
) -> Result<Vec<ExplorationTree>, CharsetError> {
    let mut seq = vec![ExplorationTree::initial(bp)];
    loop {
        let last = seq.last().expect("non-empty");
        if last.level >= level_cap {
            return Err(CharsetError::NoFixpointWithinCap(last.level));
        }
        let next = advance_tree(bp, last, node_cap)?;
        let done = trees_equal(last, &next);
        seq.push(next);
        if done {
            return Ok(seq);
        }
    }
}

#[derive(Debug, Clone)]
pub struct CharacteristicSet {
    pub sample: Sample,
    /// Index of the first tree equal in shape to its predecessor.
    pub final_level: u32,
    pub tree: ExplorationTree,
}

/// For every node `u` of the final tree: `(u, n, T)` for the least `n` with
/// `u` feasible, and `(u, n, F)` for the largest `n` with `u` infeasible
/// (the final level when `u` is never feasible), restricted to
/// `1..=final_level`.
pub fn generate_cs(
    bp: &BroadcastProtocol,
    level_cap: u32,
    node_cap: usize,
) -> Result<CharacteristicSet, CharsetError> {
    let mut seq = tree_sequence(bp, level_cap, node_cap)?;
    let tree = seq.pop().expect("at least two trees");
    let final_level = tree.level;
    let mut entries = Vec::new();
    let mut words: Vec<&Word> = tree.nodes.iter().map(|n| &n.word).collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let mut seen = HashSet::new();
    for w in words {
        if !seen.insert(w) {
            continue;
        }
        let names: Vec<&str> = w.iter().map(|&a| bp.action_name(a)).collect();
        match bp.min_processes(w, final_level).expect("valid word") {
            Some(n) => {
                entries.push(SampleEntry::new(&names, n, true));
                if n > 1 {
                    entries.push(SampleEntry::new(&names, n - 1, false));
                }
            }
            None => entries.push(SampleEntry::new(&names, final_level, false)),
        }
    }
    let sample = Sample::new(entries).expect("extracted from a single protocol");
    Ok(CharacteristicSet { sample, final_level, tree })
}
