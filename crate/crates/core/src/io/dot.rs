use std::collections::BTreeMap;

use crate::bp::BroadcastProtocol;

fn esc(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz source: solid edges for sends (`a!!`), dashed ones for
/// responses (`a??`). Self-loop responses are left out, and parallel
/// responses between the same pair of states share one edge.
pub fn bp_to_dot(bp: &BroadcastProtocol) -> String {
    let mut out = String::from("digraph bp {\n  rankdir=LR;\n  node [shape=circle];\n");
    for s in 0..bp.num_states() {
        let shape = if s == bp.initial() { "doublecircle" } else { "circle" };
        out.push_str(&format!("  {} [shape={shape}];\n", esc(bp.state_name(s))));
    }
    for a in 0..bp.num_actions() {
        out.push_str(&format!(
            "  {} -> {} [label={}];\n",
            esc(bp.state_name(bp.send_source(a))),
            esc(bp.state_name(bp.send_target(a))),
            esc(&format!("{}!!", bp.action_name(a)))
        ));
    }
    let mut recv: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
    for a in 0..bp.num_actions() {
        for s in 0..bp.num_states() {
            let t = bp.response(a, s);
            if t != s {
                recv.entry((s, t)).or_default().push(bp.action_name(a));
            }
        }
    }
    for ((s, t), names) in recv {
        let label: Vec<String> = names.iter().map(|n| format!("{n}??")).collect();
        out.push_str(&format!(
            "  {} -> {} [label={}, style=dashed];\n",
            esc(bp.state_name(s)),
            esc(bp.state_name(t)),
            esc(&label.join(", "))
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bp::examples::b1;

    #[test]
    fn sends_solid_responses_dashed() {
        let dot = bp_to_dot(&b1());
        assert!(dot.starts_with("digraph bp {"));
        assert!(dot.contains("!!\"];"));
        assert!(dot.contains("style=dashed"));
        assert!(dot.trim_end().ends_with('}'));
    }
}
