use super::Automaton;
use std::collections::BTreeMap;
use std::fmt::Write;

/// Graphviz rendering. Parallel edges are merged into one comma-separated
/// label; marked states are double circles.
pub fn to_dot(a: &Automaton) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  __init [shape=point];\n");
    for q in 0..a.num_states() {
        let shape = if a.is_marked(q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  \"{}\" [shape={shape}];", escape(a.state_name(q)));
    }
    let _ = writeln!(
        out,
        "  __init -> \"{}\";",
        escape(a.state_name(a.initial()))
    );
    let mut edges: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
    for (s, e, t) in a.transitions() {
        edges
            .entry((s, t))
            .or_default()
            .push(a.alphabet().event(e).as_str());
    }
    for ((s, t), labels) in edges {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            escape(a.state_name(s)),
            escape(a.state_name(t)),
            escape(&labels.join(", "))
        );
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
