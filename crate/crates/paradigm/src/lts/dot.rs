//! Graphviz rendering, best effort.

use super::system::Lts;

pub fn export_dot(lts: &Lts) -> String {
    let mut out = String::from("digraph lts {\n  rankdir=LR;\n  node [shape=circle];\n");
    out.push_str("  init [shape=point];\n");
    out.push_str(&format!("  init -> s{};\n", lts.initial()));
    for s in 0..lts.num_states() {
        let label = escape(&lts.state_name(s));
        out.push_str(&format!("  s{s} [label=\"{label}\"];\n"));
    }
    for (src, label, dst) in lts.transitions() {
        let text = escape(&label.to_string());
        out.push_str(&format!("  s{src} -> s{dst} [label=\"{text}\"];\n"));
    }
    out.push_str("}\n");
    out
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}
