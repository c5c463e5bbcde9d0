//! Graphviz output for the duo graph and the conflict graph.

use std::fmt::Write;

use crate::conflict_graph::ConflictGraph;
use crate::duo_graph::DuoGraph;

pub fn duo_graph_dot(g: &DuoGraph) -> String {
    let mut out = String::from("graph duo_graph {\n  rankdir=LR;\n  node [shape=box];\n");
    out.push_str("  { rank=same;");
    for d in g.left() {
        write!(out, " a{};", d.position).unwrap();
    }
    out.push_str(" }\n  { rank=same;");
    for d in g.right() {
        write!(out, " b{};", d.position).unwrap();
    }
    out.push_str(" }\n");
    for d in g.left() {
        writeln!(out, "  a{} [label=\"a_{}:{}\"];", d.position, d.position, escape(&d.to_string())).unwrap();
    }
    for d in g.right() {
        writeln!(out, "  b{} [label=\"b_{}:{}\"];", d.position, d.position, escape(&d.to_string())).unwrap();
    }
    for e in g.edges() {
        writeln!(out, "  a{} -- b{} [label=\"{:.6}\"];", e.left, e.right, e.weight).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn conflict_graph_dot(gc: &ConflictGraph) -> String {
    let mut out = String::from("graph conflict_graph {\n");
    for v in gc.vertices() {
        let (i, j) = v.endpoints();
        writeln!(out, "  v{} [label=\"({i},{j}) w={:.6}\"];", v.id, v.weight()).unwrap();
    }
    for (u, v) in gc.adjacent_pairs() {
        writeln!(out, "  v{u} -- v{v};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
