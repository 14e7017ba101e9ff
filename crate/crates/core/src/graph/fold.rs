//! Stallings folding driven by a disjoint-set forest.
//!
//! Each vertex class keeps one slot per (label, direction). Inserting an
//! edge into an occupied slot identifies the two edges and schedules their
//! far endpoints for merging; merging two vertex classes re-inserts the
//! absorbed class's slots. Every edge is inserted once and every merge
//! touches `2 * rank` slots, so the whole fold is near-linear.

use crate::dsu::DisjointSets;

use super::{Edge, LabeledGraph};

/// A folded graph with the quotient maps from the input.
#[derive(Debug, Clone)]
pub struct Folding {
    pub graph: LabeledGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

struct Workspace<'a> {
    edges: &'a [Edge],
    slots_per_vertex: usize,
    slots: Vec<Option<usize>>,
    vertices: DisjointSets,
    edge_classes: DisjointSets,
    pending: Vec<(usize, usize)>,
}

impl Workspace<'_> {
    fn slot(&self, label: u32, incoming: bool) -> usize {
        2 * label as usize + incoming as usize
    }

    fn insert(&mut self, root: usize, slot: usize, edge: usize) {
        let index = root * self.slots_per_vertex + slot;
        match self.slots[index] {
            None => self.slots[index] = Some(edge),
            Some(existing) => {
                if self.edge_classes.union(existing, edge).is_some() {
                    let incoming = slot % 2 == 1;
                    let far = |e: &Edge| if incoming { e.source } else { e.target };
                    self.pending.push((far(&self.edges[existing]), far(&self.edges[edge])));
                }
            }
        }
    }

    fn drain(&mut self) {
        while let Some((u, v)) = self.pending.pop() {
            let Some((root, absorbed)) = self.vertices.union(u, v) else {
                continue;
            };
            for slot in 0..self.slots_per_vertex {
                if let Some(edge) = self.slots[absorbed * self.slots_per_vertex + slot].take() {
                    self.insert(root, slot, edge);
                }
            }
        }
    }
}

pub(super) fn fold(graph: &LabeledGraph) -> Folding {
    let n = graph.vertex_count();
    let edges = graph.edges();
    let slots_per_vertex = 2 * graph.alphabet().rank() as usize;
    let mut ws = Workspace {
        edges,
        slots_per_vertex,
        slots: vec![None; n * slots_per_vertex],
        vertices: DisjointSets::new(n),
        edge_classes: DisjointSets::new(edges.len()),
        pending: Vec::new(),
    };
    for (i, e) in edges.iter().enumerate() {
        let s = ws.vertices.find(e.source);
        let out_slot = ws.slot(e.label, false);
        ws.insert(s, out_slot, i);
        let t = ws.vertices.find(e.target);
        let in_slot = ws.slot(e.label, true);
        ws.insert(t, in_slot, i);
        ws.drain();
    }

    let (vertex_count, vertex_map) = ws.vertices.classes();
    let (_, edge_map) = ws.edge_classes.classes();
    let mut folded_edges: Vec<Option<Edge>> = vec![None; edges.len()];
    for (i, e) in edges.iter().enumerate() {
        folded_edges[edge_map[i]].get_or_insert(Edge {
            source: vertex_map[e.source],
            label: e.label,
            target: vertex_map[e.target],
        });
    }
    let folded_edges: Vec<Edge> = folded_edges.into_iter().map_while(|e| e).collect();
    let basepoint = graph.basepoint().map(|b| vertex_map[b]);
    Folding {
        graph: LabeledGraph::from_parts(graph.alphabet(), vertex_count, folded_edges, basepoint),
        vertex_map,
        edge_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Alphabet, Word};
    use proptest::prelude::*;

    fn bouquet(texts: &[&str]) -> LabeledGraph {
        let ab = Alphabet::rank_two();
        let words: Vec<Word> = texts.iter().map(|t| Word::parse(ab, t).unwrap()).collect();
        LabeledGraph::bouquet(ab, &words).unwrap()
    }

    #[test]
    fn duplicate_generator_folds_to_one_loop() {
        let f = bouquet(&["a", "a"]).fold();
        assert_eq!((f.graph.vertex_count(), f.graph.edge_count()), (1, 1));
        assert_eq!(f.edge_map, vec![0, 0]);
    }

    #[test]
    fn proper_graph_is_a_fixed_point() {
        let g = bouquet(&["ab", "bA"]).fold().graph;
        let again = g.fold();
        assert_eq!(again.graph, g);
        assert_eq!(again.vertex_map, (0..g.vertex_count()).collect::<Vec<_>>());
    }

    #[test]
    fn a_and_ab_hand_fold() {
        // a-loop at 0 plus the path 0 -a-> 1 -b-> 0. The two a-edges leaving 0
        // fold, collapsing 1 onto 0: one vertex, a-loop and b-loop.
        let f = bouquet(&["a", "ab"]).fold();
        let s = f.graph.stats();
        assert_eq!((s.vertices, s.edges, s.chi, s.rank), (1, 2, -1, 2));
        assert!(f.graph.is_properly_labeled());
    }

    #[test]
    fn a_and_bab_hand_fold() {
        // a-loop at 0, path 0 -b-> 1 -a-> 2 -b-> 0: already proper.
        let f = bouquet(&["a", "bab"]).fold();
        let s = f.graph.stats();
        assert_eq!((s.vertices, s.edges, s.chi, s.rank), (3, 4, -1, 2));
    }

    #[test]
    fn nested_cancellation_collapses_completely() {
        // abBA is not reduced as a graph loop; folding zips it to a tree
        let edges = vec![
            Edge { source: 0, label: 0, target: 1 },
            Edge { source: 1, label: 1, target: 2 },
            Edge { source: 3, label: 1, target: 2 },
            Edge { source: 0, label: 0, target: 3 },
        ];
        let g = LabeledGraph::from_parts(Alphabet::rank_two(), 4, edges, Some(0));
        let f = g.fold();
        assert_eq!((f.graph.vertex_count(), f.graph.edge_count()), (3, 2));
        assert_eq!(f.graph.stats().rank, 0);
    }

    fn raw_graph() -> impl Strategy<Value = LabeledGraph> {
        (1usize..9).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0u32..2, 0..n), 0..14).prop_map(move |es| {
                let edges = es.into_iter().map(|(s, l, t)| Edge { source: s, label: l, target: t }).collect();
                LabeledGraph::from_parts(Alphabet::rank_two(), n, edges, Some(0))
            })
        })
    }

    /// Naive fold: repeatedly find any foldable pair and identify it.
    fn naive_fold(g: &LabeledGraph, order: &[usize]) -> LabeledGraph {
        let mut n = g.vertex_count();
        let mut edges: Vec<Edge> = order.iter().map(|&i| g.edge(i)).collect();
        let mut base = g.basepoint().unwrap();
        loop {
            let mut found = None;
            'search: for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    let (e, f) = (edges[i], edges[j]);
                    if e.label == f.label && (e.source == f.source || e.target == f.target) {
                        found = Some((i, j));
                        break 'search;
                    }
                }
            }
            let Some((i, j)) = found else { break };
            let (e, f) = (edges[i], edges[j]);
            edges.remove(j);
            let (keep, drop) = if e.source == f.source { (e.target, f.target) } else { (e.source, f.source) };
            if keep != drop {
                let rename = |v: usize| {
                    let v = if v == drop { keep } else { v };
                    if v > drop {
                        v - 1
                    } else {
                        v
                    }
                };
                for x in &mut edges {
                    x.source = rename(x.source);
                    x.target = rename(x.target);
                }
                base = rename(base);
                n -= 1;
            }
        }
        LabeledGraph::from_parts(Alphabet::rank_two(), n, edges, Some(base))
    }

    proptest! {
        #[test]
        fn fold_matches_naive_folding(g in raw_graph(), seed in any::<u64>()) {
            let fast = g.fold();
            prop_assert!(fast.graph.is_properly_labeled());
            let mut order: Vec<usize> = (0..g.edge_count()).collect();
            // deterministic shuffle
            let mut s = seed | 1;
            for i in (1..order.len()).rev() {
                s ^= s << 13; s ^= s >> 7; s ^= s << 17;
                order.swap(i, (s % (i as u64 + 1)) as usize);
            }
            let slow = naive_fold(&g, &order);
            prop_assert!(slow.is_properly_labeled());
            let fast_core = fast.graph.based_component().graph;
            let slow_core = slow.based_component().graph;
            prop_assert!(fast_core.is_based_isomorphic(&slow_core));
            prop_assert_eq!(fast.graph.stats().components, slow.stats().components);
            prop_assert_eq!(fast.graph.vertex_count(), slow.vertex_count());
            prop_assert_eq!(fast.graph.edge_count(), slow.edge_count());
        }

        #[test]
        fn fold_maps_are_label_preserving_graph_maps(g in raw_graph()) {
            let f = g.fold();
            for (i, e) in g.edges().iter().enumerate() {
                let image = f.graph.edge(f.edge_map[i]);
                prop_assert_eq!(image.label, e.label);
                prop_assert_eq!(image.source, f.vertex_map[e.source]);
                prop_assert_eq!(image.target, f.vertex_map[e.target]);
            }
            // folding never raises the rank of the based component
            let before = g.component_rank(0);
            let after = f.graph.component_rank(f.vertex_map[0]);
            prop_assert!(after <= before);
        }
    }
}
