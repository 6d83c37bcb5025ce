//! Graphviz export of one explicit level.

use std::fmt::Write;

use chaosembed_core::embed::EmbeddingLevel;

/// `digraph level_<n>`; vertices of `F` are boxes, the hub a double circle.
pub fn level_to_dot(level: &EmbeddingLevel) -> String {
    let g = &level.graph;
    let mut out = String::new();
    writeln!(out, "digraph level_{} {{", level.level).unwrap();
    for v in 0..g.vertex_count() {
        let name = g.name(v);
        let attrs = if v == level.hub {
            " [shape=doublecircle]"
        } else if level.is_f_vertex(v) {
            " [shape=box]"
        } else {
            ""
        };
        writeln!(out, "  \"{name}\"{attrs};").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "  \"{}\" -> \"{}\";", g.name(u), g.name(v)).unwrap();
    }
    out.push_str("}\n");
    out
}
