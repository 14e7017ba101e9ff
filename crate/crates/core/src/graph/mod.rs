//! Finite oriented graphs with edges labeled by free generators.
//!
//! Vertices are dense indices `0..vertex_count`. An edge labeled `x` from
//! `u` to `v` reads the letter `x` when crossed forwards and `x⁻¹` when
//! crossed backwards. Graphs are values: operations return new graphs
//! together with the correspondence maps they need.

mod canonical;
mod dot;
mod fold;

use std::collections::VecDeque;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Alphabet, Letter, Word, WordError};

pub use canonical::CanonicalCode;
pub use fold::Folding;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} references vertex {vertex}, but the graph has {vertex_count} vertices")]
    DanglingEdge { edge: usize, vertex: usize, vertex_count: usize },
    #[error("edge {edge} has label {label} outside an alphabet of rank {rank}")]
    InvalidLabel { edge: usize, label: u32, rank: u32 },
    #[error("basepoint {0} is not a vertex")]
    InvalidBasepoint(usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub label: u32,
    pub target: usize,
}

/// Orientation of an edge relative to one of its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Outgoing,
    Incoming,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub direction: Direction,
}

/// The labels and directions present in the star of a vertex, as a sorted
/// multiset. Its length is the valence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexType(pub Vec<(u32, Direction)>);

impl VertexType {
    pub fn valence(&self) -> usize {
        self.0.len()
    }

    /// Whether the star of `self` admits a labeled immersion into the star of
    /// `other`: every half-edge of `self` has a distinct partner in `other`.
    pub fn immerses_into(&self, other: &VertexType) -> bool {
        let mut j = 0;
        for item in &self.0 {
            while j < other.0.len() && other.0[j] < *item {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != *item {
                return false;
            }
            j += 1;
        }
        true
    }
}

/// Two vertices of equal valence have the same type when their stars are
/// labeled-isomorphic.
pub fn same_type(t1: &VertexType, t2: &VertexType) -> bool {
    t1.valence() == t2.valence() && t1.immerses_into(t2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub chi: i64,
    /// `E − V + components`: the total rank of the fundamental groupoid.
    pub rank: i64,
    pub components: usize,
    pub branch_count: usize,
    pub max_valence: usize,
    pub extremal_count: usize,
}

/// Where reading a word got stuck.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("letter {position} cannot be read from vertex {vertex}")]
pub struct TraceFailure {
    pub position: usize,
    pub vertex: usize,
}

/// A subgraph extracted from a larger one, with maps from the parent.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub graph: LabeledGraph,
    pub vertex_map: Vec<Option<usize>>,
    pub edge_map: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct LabeledGraph {
    alphabet: Alphabet,
    vertex_count: usize,
    edges: Vec<Edge>,
    basepoint: Option<usize>,
    stars: OnceLock<Vec<Vec<HalfEdge>>>,
}

impl PartialEq for LabeledGraph {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.vertex_count == other.vertex_count
            && self.edges == other.edges
            && self.basepoint == other.basepoint
    }
}

impl Eq for LabeledGraph {}

impl LabeledGraph {
    pub fn new(
        alphabet: Alphabet,
        vertex_count: usize,
        edges: Vec<Edge>,
        basepoint: Option<usize>,
    ) -> Result<Self, GraphError> {
        for (i, e) in edges.iter().enumerate() {
            for v in [e.source, e.target] {
                if v >= vertex_count {
                    return Err(GraphError::DanglingEdge { edge: i, vertex: v, vertex_count });
                }
            }
            if e.label >= alphabet.rank() {
                return Err(GraphError::InvalidLabel { edge: i, label: e.label, rank: alphabet.rank() });
            }
        }
        if let Some(b) = basepoint {
            if b >= vertex_count {
                return Err(GraphError::InvalidBasepoint(b));
            }
        }
        Ok(Self::from_parts(alphabet, vertex_count, edges, basepoint))
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        vertex_count: usize,
        edges: Vec<Edge>,
        basepoint: Option<usize>,
    ) -> Self {
        LabeledGraph { alphabet, vertex_count, edges, basepoint, stars: OnceLock::new() }
    }

    /// A single based vertex with no edges.
    pub fn point(alphabet: Alphabet) -> Self {
        Self::from_parts(alphabet, 1, Vec::new(), Some(0))
    }

    /// One subdivided loop per nontrivial generator, all through a common
    /// basepoint.
    pub fn bouquet(alphabet: Alphabet, generators: &[Word]) -> Result<Self, GraphError> {
        let mut vertex_count = 1;
        let mut edges = Vec::new();
        for word in generators {
            alphabet.check(word.alphabet())?;
            let n = word.len();
            if n == 0 {
                continue;
            }
            let mut current = 0;
            for (i, &letter) in word.letters().iter().enumerate() {
                let next = if i + 1 == n {
                    0
                } else {
                    vertex_count += 1;
                    vertex_count - 1
                };
                edges.push(letter_edge(current, letter, next));
                current = next;
            }
        }
        Ok(Self::from_parts(alphabet, vertex_count, edges, Some(0)))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Edge {
        self.edges[index]
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn with_basepoint(&self, basepoint: Option<usize>) -> Self {
        Self::from_parts(self.alphabet, self.vertex_count, self.edges.clone(), basepoint)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64
    }

    /// Half-edges at `v`, sorted by label then direction.
    pub fn star(&self, v: usize) -> &[HalfEdge] {
        &self.stars()[v]
    }

    fn stars(&self) -> &Vec<Vec<HalfEdge>> {
        self.stars.get_or_init(|| {
            let mut stars = vec![Vec::new(); self.vertex_count];
            for (i, e) in self.edges.iter().enumerate() {
                stars[e.source].push(HalfEdge { edge: i, direction: Direction::Outgoing });
                stars[e.target].push(HalfEdge { edge: i, direction: Direction::Incoming });
            }
            for star in &mut stars {
                star.sort_by_key(|h| (self.edges[h.edge].label, h.direction, h.edge));
            }
            stars
        })
    }

    pub fn valence(&self, v: usize) -> usize {
        self.star(v).len()
    }

    /// The vertex at the far end of a half-edge.
    pub fn opposite(&self, half: HalfEdge) -> usize {
        let e = self.edges[half.edge];
        match half.direction {
            Direction::Outgoing => e.target,
            Direction::Incoming => e.source,
        }
    }

    pub fn vertex_type(&self, v: usize) -> VertexType {
        VertexType(self.star(v).iter().map(|h| (self.edges[h.edge].label, h.direction)).collect())
    }

    /// No two distinct edges with the same label share an initial vertex or a
    /// terminal vertex.
    pub fn is_properly_labeled(&self) -> bool {
        (0..self.vertex_count).all(|v| {
            let t = self.vertex_type(v);
            t.0.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Follows `letter` from `v`. Deterministic on properly labeled graphs;
    /// otherwise the first matching half-edge wins.
    pub fn step(&self, v: usize, letter: Letter) -> Option<(usize, usize)> {
        let direction = if letter.is_inverse() { Direction::Incoming } else { Direction::Outgoing };
        self.star(v)
            .iter()
            .find(|h| h.direction == direction && self.edges[h.edge].label == letter.index())
            .map(|&h| (h.edge, self.opposite(h)))
    }

    pub fn trace(&self, start: usize, word: &Word) -> Result<usize, TraceFailure> {
        let mut v = start;
        for (position, &letter) in word.letters().iter().enumerate() {
            match self.step(v, letter) {
                Some((_, next)) => v = next,
                None => return Err(TraceFailure { position, vertex: v }),
            }
        }
        Ok(v)
    }

    /// Component index per vertex, numbered by smallest vertex.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for root in 0..self.vertex_count {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &h in self.star(v) {
                    let u = self.opposite(h);
                    if comp[u] == usize::MAX {
                        comp[u] = count;
                        queue.push_back(u);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 <= 1
    }

    pub fn stats(&self) -> GraphStats {
        let (components, _) = self.components();
        let valences: Vec<usize> = (0..self.vertex_count).map(|v| self.valence(v)).collect();
        GraphStats {
            vertices: self.vertex_count,
            edges: self.edges.len(),
            chi: self.euler_characteristic(),
            rank: self.edges.len() as i64 - self.vertex_count as i64 + components as i64,
            components,
            branch_count: valences.iter().filter(|&&d| d >= 3).count(),
            max_valence: valences.iter().copied().max().unwrap_or(0),
            extremal_count: valences.iter().filter(|&&d| d <= 1).count(),
        }
    }

    pub fn branch_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count).filter(|&v| self.valence(v) >= 3).collect()
    }

    /// Rank of the fundamental group of the component holding `v`.
    pub fn component_rank(&self, v: usize) -> i64 {
        let (_, comp) = self.components();
        let c = comp[v];
        let vertices = comp.iter().filter(|&&x| x == c).count() as i64;
        let edges = self.edges.iter().filter(|e| comp[e.source] == c).count() as i64;
        edges - vertices + 1
    }

    /// Keeps the vertices flagged in `keep` and every edge between them.
    pub fn restrict(&self, keep: &[bool]) -> Restriction {
        let mut vertex_map = vec![None; self.vertex_count];
        let mut count = 0;
        for v in 0..self.vertex_count {
            if keep[v] {
                vertex_map[v] = Some(count);
                count += 1;
            }
        }
        let mut edge_map = vec![None; self.edges.len()];
        let mut edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if let (Some(s), Some(t)) = (vertex_map[e.source], vertex_map[e.target]) {
                edge_map[i] = Some(edges.len());
                edges.push(Edge { source: s, label: e.label, target: t });
            }
        }
        let basepoint = self.basepoint.and_then(|b| vertex_map[b]);
        Restriction { graph: Self::from_parts(self.alphabet, count, edges, basepoint), vertex_map, edge_map }
    }

    /// The component containing the basepoint.
    pub fn based_component(&self) -> Restriction {
        let b = self.basepoint.expect("based_component requires a basepoint");
        let (_, comp) = self.components();
        let keep: Vec<bool> = comp.iter().map(|&c| c == comp[b]).collect();
        self.restrict(&keep)
    }

    /// Repeatedly deletes extremal vertices other than the basepoint. On a
    /// connected based graph this is the smallest subgraph containing the
    /// basepoint that carries its fundamental group.
    pub fn trim_to_core(&self) -> Restriction {
        self.trim(self.basepoint)
    }

    /// Repeatedly deletes every extremal vertex, basepoint included. Trees
    /// vanish entirely.
    pub fn unbased_core(&self) -> Restriction {
        self.trim(None)
    }

    fn trim(&self, protected: Option<usize>) -> Restriction {
        let mut valence: Vec<usize> = (0..self.vertex_count).map(|v| self.valence(v)).collect();
        let mut alive = vec![true; self.vertex_count];
        let mut queue: VecDeque<usize> =
            (0..self.vertex_count).filter(|&v| valence[v] <= 1 && Some(v) != protected).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &h in self.star(v) {
                let u = self.opposite(h);
                if alive[u] {
                    valence[u] -= 1;
                    if valence[u] <= 1 && Some(u) != protected {
                        queue.push_back(u);
                    }
                }
            }
        }
        self.restrict(&alive)
    }

    /// Identifies equally labeled edges sharing an endpoint until the graph is
    /// properly labeled.
    pub fn fold(&self) -> Folding {
        fold::fold(self)
    }

    /// Based canonical relabeling; `None` unless the graph is based, connected
    /// and properly labeled.
    pub fn canonical(&self) -> Option<(LabeledGraph, Vec<usize>)> {
        canonical::canonical_based(self)
    }

    /// Canonical code independent of any basepoint, for connected properly
    /// labeled graphs.
    pub fn canonical_unbased(&self) -> Option<CanonicalCode> {
        canonical::canonical_unbased(self)
    }

    /// Equality of based, labeled isomorphism classes.
    pub fn is_based_isomorphic(&self, other: &LabeledGraph) -> bool {
        match (self.canonical(), other.canonical()) {
            (Some((a, _)), Some((b, _))) => a == b,
            _ => false,
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        dot::render(self, name, None)
    }

    pub fn to_dot_with_labels(&self, name: &str, labels: &[String]) -> String {
        dot::render(self, name, Some(labels))
    }

    /// Reads the label of a path given as a sequence of half-edges.
    pub fn path_word(&self, path: &[HalfEdge]) -> Word {
        let letters = path.iter().map(|h| {
            let label = self.edges[h.edge].label;
            match h.direction {
                Direction::Outgoing => Letter::generator(label),
                Direction::Incoming => Letter::inverse_of(label),
            }
        });
        Word::reduce(self.alphabet, letters).expect("labels are valid")
    }

    /// Breadth-first tree from `root`: for each reached vertex, the half-edge
    /// used to enter it.
    pub fn bfs_tree(&self, root: usize) -> Vec<Option<HalfEdge>> {
        let mut parent = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &h in self.star(v) {
                let u = self.opposite(h);
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(h);
                    queue.push_back(u);
                }
            }
        }
        parent
    }

    /// Half-edges from `root` to `target` along a BFS tree.
    pub fn tree_path(&self, tree: &[Option<HalfEdge>], root: usize, target: usize) -> Vec<HalfEdge> {
        let mut path = Vec::new();
        let mut v = target;
        while v != root {
            let h = tree[v].expect("vertex reachable from root");
            path.push(h);
            v = match h.direction {
                Direction::Outgoing => self.edges[h.edge].source,
                Direction::Incoming => self.edges[h.edge].target,
            };
        }
        path.reverse();
        path
    }
}

pub(crate) fn letter_edge(from: usize, letter: Letter, to: usize) -> Edge {
    if letter.is_inverse() {
        Edge { source: to, label: letter.index(), target: from }
    } else {
        Edge { source: from, label: letter.index(), target: to }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::rank_two()
    }

    fn words(texts: &[&str]) -> Vec<Word> {
        texts.iter().map(|t| Word::parse(ab(), t).unwrap()).collect()
    }

    fn bouquet(texts: &[&str]) -> LabeledGraph {
        LabeledGraph::bouquet(ab(), &words(texts)).unwrap()
    }

    #[test]
    fn bouquet_examples() {
        let g = bouquet(&["a", "b"]);
        assert_eq!((g.vertex_count(), g.edge_count(), g.euler_characteristic()), (1, 2, -1));
        let g = bouquet(&[]);
        assert_eq!((g.vertex_count(), g.euler_characteristic()), (1, 1));
        let g = bouquet(&["ab"]);
        assert_eq!((g.vertex_count(), g.edge_count(), g.euler_characteristic()), (2, 2, 0));
        assert_eq!(bouquet(&["", "a"]).edge_count(), 1);
    }

    #[test]
    fn construction_rejects_bad_input() {
        let e = Edge { source: 0, label: 0, target: 3 };
        assert!(matches!(LabeledGraph::new(ab(), 2, vec![e], None), Err(GraphError::DanglingEdge { vertex: 3, .. })));
        let e = Edge { source: 0, label: 5, target: 0 };
        assert!(matches!(LabeledGraph::new(ab(), 1, vec![e], None), Err(GraphError::InvalidLabel { .. })));
        assert_eq!(LabeledGraph::new(ab(), 1, vec![], Some(1)), Err(GraphError::InvalidBasepoint(1)));
    }

    #[test]
    fn stats_examples() {
        let s = bouquet(&["a", "b"]).stats();
        assert_eq!((s.chi, s.rank, s.branch_count, s.max_valence), (-1, 2, 1, 4));
        let s = LabeledGraph::point(ab()).stats();
        assert_eq!((s.chi, s.rank, s.extremal_count), (1, 0, 1));
    }

    #[test]
    fn vertex_types() {
        // a-in, a-out at both interior vertices of a cycle aaa
        let g = bouquet(&["aaa"]);
        assert!(same_type(&g.vertex_type(1), &g.vertex_type(2)));
        // the middle vertex of "ab" has a-in and b-out
        let h = bouquet(&["ab"]);
        assert!(!same_type(&h.vertex_type(1), &g.vertex_type(1)));
        let sub = VertexType(vec![(0, Direction::Outgoing)]);
        assert!(sub.immerses_into(&g.vertex_type(1)));
        assert!(!same_type(&sub, &g.vertex_type(1)));
    }

    #[test]
    fn trace_examples() {
        let g = bouquet(&["a"]);
        assert_eq!(g.trace(0, &words(&["aaa"])[0]), Ok(0));
        assert_eq!(g.trace(0, &words(&["b"])[0]), Err(TraceFailure { position: 0, vertex: 0 }));
        assert_eq!(g.trace(0, &words(&["AAb"])[0]), Err(TraceFailure { position: 2, vertex: 0 }));
    }

    #[test]
    fn trim_examples() {
        // loop aa through the base with a dangling b-path of length 2 from vertex 1
        let edges = vec![
            Edge { source: 0, label: 0, target: 1 },
            Edge { source: 1, label: 0, target: 0 },
            Edge { source: 1, label: 1, target: 2 },
            Edge { source: 2, label: 1, target: 3 },
        ];
        let g = LabeledGraph::new(ab(), 4, edges, Some(0)).unwrap();
        let core = g.trim_to_core();
        assert_eq!((core.graph.vertex_count(), core.graph.edge_count()), (2, 2));
        assert_eq!(core.vertex_map, vec![Some(0), Some(1), None, None]);

        let p = LabeledGraph::point(ab()).trim_to_core();
        assert_eq!(p.graph.vertex_count(), 1);
        assert_eq!(p.graph.basepoint(), Some(0));

        // aba⁻¹ folds to nothing new; its core keeps the extremal basepoint
        let folded = bouquet(&["abA"]).fold().graph;
        let core = folded.trim_to_core().graph;
        assert_eq!((core.vertex_count(), core.edge_count()), (2, 2));
        let base = core.basepoint().unwrap();
        assert_eq!(core.valence(base), 1);
        assert_eq!(core.stats().rank, 1);

        // the unbased core drops the hair as well
        let bare = folded.unbased_core().graph;
        assert_eq!((bare.vertex_count(), bare.edge_count(), bare.basepoint()), (1, 1, None));
    }

    #[test]
    fn components_and_restriction() {
        let edges = vec![Edge { source: 0, label: 0, target: 0 }, Edge { source: 1, label: 1, target: 2 }];
        let g = LabeledGraph::new(ab(), 4, edges, Some(1)).unwrap();
        assert_eq!(g.components(), (3, vec![0, 1, 1, 2]));
        let based = g.based_component();
        assert_eq!(based.graph.vertex_count(), 2);
        assert_eq!(based.graph.basepoint(), Some(0));
        assert_eq!(g.component_rank(0), 1);
        assert_eq!(g.component_rank(2), 0);
    }

    #[test]
    fn euler_identity_on_cores() {
        // −χ = Σ (valence − 2) / 2 when nothing is extremal
        let g = bouquet(&["aab", "bAbb", "abab"]).fold().graph.unbased_core().graph;
        let sum: i64 = (0..g.vertex_count()).map(|v| g.valence(v) as i64 - 2).sum();
        assert_eq!(-2 * g.euler_characteristic(), sum);
    }
}
