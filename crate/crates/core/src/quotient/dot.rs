use super::QuotientLevel;
use crate::graph::EdgeKind;
use std::fmt::Write;

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering of a level. Nodes are named `n:classid`, infinite
/// components are drawn as double circles and quotient edges dashed with
/// label `inf`.
pub fn export_dot(level: &QuotientLevel) -> String {
    let name = |c: usize| quoted(&format!("{}:{}", level.n, level.classes[c].id));
    let mut out = String::from("digraph {\n");
    for (i, class) in level.classes.iter().enumerate() {
        if class.is_infinite() {
            writeln!(out, "  {} [shape=doublecircle];", name(i)).unwrap();
        } else {
            writeln!(out, "  {};", name(i)).unwrap();
        }
    }
    for e in level.graph.edges() {
        let style = match e.kind {
            EdgeKind::Concrete => "",
            EdgeKind::Quotient => " [style=dashed, label=\"inf\"]",
        };
        writeln!(out, "  {} -> {}{};", name(e.tail.0), name(e.head.0), style).unwrap();
    }
    out.push_str("}\n");
    out
}
