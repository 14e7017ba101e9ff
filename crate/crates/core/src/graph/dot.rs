use std::fmt::Write;

use crate::word::Letter;

use super::LabeledGraph;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

pub(super) fn render(graph: &LabeledGraph, name: &str, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\"")).unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in 0..graph.vertex_count() {
        let shape = if graph.basepoint() == Some(v) { "doublecircle" } else { "circle" };
        let label = labels.and_then(|l| l.get(v)).cloned().unwrap_or_else(|| v.to_string());
        writeln!(out, "  {v} [shape={shape}, label=\"{label}\"];").unwrap();
    }
    for e in graph.edges() {
        let color = PALETTE[e.label as usize % PALETTE.len()];
        writeln!(
            out,
            "  {} -> {} [label=\"{}\", color=\"{color}\", fontcolor=\"{color}\", arrowhead=normal];",
            e.source,
            e.target,
            Letter::generator(e.label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use crate::graph::LabeledGraph;
    use crate::word::{Alphabet, Word};

    #[test]
    fn dot_marks_basepoint_and_colors_labels() {
        let ab = Alphabet::rank_two();
        let g = LabeledGraph::bouquet(ab, &[Word::parse(ab, "a").unwrap(), Word::parse(ab, "b").unwrap()]).unwrap();
        let dot = g.to_dot("rose");
        assert!(dot.starts_with("digraph \"rose\" {"));
        assert!(dot.contains("0 [shape=doublecircle"));
        assert!(dot.contains("0 -> 0 [label=\"a\", color=\"#1f77b4\""));
        assert!(dot.contains("0 -> 0 [label=\"b\", color=\"#d62728\""));
        assert_eq!(dot, g.to_dot("rose"));
    }
}
