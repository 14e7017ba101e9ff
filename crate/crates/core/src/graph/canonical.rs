//! Canonical numbering for connected properly labeled graphs.
//!
//! Starting from a root, vertices are numbered in breadth-first order with
//! each star scanned by (label, direction). In a properly labeled graph each
//! (label, direction) occurs at most once per star, so the numbering depends
//! only on the isomorphism class of the rooted graph.

use std::collections::VecDeque;

use super::{Edge, LabeledGraph};

/// Vertex count plus the sorted, renumbered edge list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
}

fn number_from(graph: &LabeledGraph, root: usize) -> Option<Vec<usize>> {
    let n = graph.vertex_count();
    let mut order = vec![usize::MAX; n];
    order[root] = 0;
    let mut next = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &h in graph.star(v) {
            let u = graph.opposite(h);
            if order[u] == usize::MAX {
                order[u] = next;
                next += 1;
                queue.push_back(u);
            }
        }
    }
    (next == n).then_some(order)
}

fn code_for(graph: &LabeledGraph, order: &[usize]) -> CanonicalCode {
    let mut edges: Vec<Edge> = graph
        .edges()
        .iter()
        .map(|e| Edge { source: order[e.source], label: e.label, target: order[e.target] })
        .collect();
    edges.sort();
    CanonicalCode { vertex_count: graph.vertex_count(), edges }
}

pub(super) fn canonical_based(graph: &LabeledGraph) -> Option<(LabeledGraph, Vec<usize>)> {
    let root = graph.basepoint()?;
    if !graph.is_properly_labeled() {
        return None;
    }
    let order = number_from(graph, root)?;
    let code = code_for(graph, &order);
    let relabeled = LabeledGraph::from_parts(graph.alphabet(), code.vertex_count, code.edges, Some(0));
    Some((relabeled, order))
}

pub(super) fn canonical_unbased(graph: &LabeledGraph) -> Option<CanonicalCode> {
    if !graph.is_properly_labeled() {
        return None;
    }
    if graph.vertex_count() == 0 {
        return Some(CanonicalCode { vertex_count: 0, edges: Vec::new() });
    }
    (0..graph.vertex_count())
        .map(|root| number_from(graph, root).map(|order| code_for(graph, &order)))
        .collect::<Option<Vec<_>>>()?
        .into_iter()
        .min()
}
