//! Subgroups as core graphs: construction, membership, bases, and the two
//! normalizations used before counting branch vertices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph};
use crate::product::{self, ProductError};
use crate::word::{Alphabet, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Product(#[from] Box<ProductError>),
    #[error("the intersection is trivial")]
    TrivialIntersection,
    #[error("generator {index}: {source}")]
    Generator { index: usize, source: WordError },
}

impl From<ProductError> for SubgroupError {
    fn from(err: ProductError) -> Self {
        SubgroupError::Product(Box::new(err))
    }
}

/// JSON form of a subgroup: `{"alphabet_rank": 2, "generators": ["aaba", ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    #[serde(default = "default_rank")]
    pub alphabet_rank: u32,
    pub generators: Vec<String>,
}

fn default_rank() -> u32 {
    2
}

impl SubgroupSpec {
    pub fn to_subgroup(&self) -> Result<Subgroup, SubgroupError> {
        let alphabet = Alphabet::new(self.alphabet_rank)?;
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(index, text)| {
                Word::parse(alphabet, text).map_err(|source| SubgroupError::Generator { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Subgroup::from_generators(alphabet, generators)
    }
}

/// A finitely generated subgroup together with its based core graph.
///
/// The graph is stored in canonical numbering, so two subgroups are equal
/// exactly when their graphs are.
#[derive(Debug, Clone)]
pub struct Subgroup {
    alphabet: Alphabet,
    generators: Vec<Word>,
    graph: LabeledGraph,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn from_generators(alphabet: Alphabet, generators: Vec<Word>) -> Result<Self, SubgroupError> {
        let bouquet = LabeledGraph::bouquet(alphabet, &generators)?;
        let core = bouquet.fold().graph.trim_to_core().graph;
        let (graph, _) = core.canonical().expect("folded core is connected, based and proper");
        Ok(Subgroup { alphabet, generators, graph })
    }

    /// Parses each generator with the compact word syntax.
    pub fn parse(alphabet: Alphabet, generators: &[&str]) -> Result<Self, SubgroupError> {
        let words = generators
            .iter()
            .enumerate()
            .map(|(index, text)| {
                Word::parse(alphabet, text).map_err(|source| SubgroupError::Generator { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_generators(alphabet, words)
    }

    /// Wraps a based core graph, reading generators off a spanning tree.
    /// The graph must be connected, based and properly labeled.
    pub fn from_core_graph(core: &LabeledGraph) -> Self {
        let trimmed = core.trim_to_core().graph;
        let (graph, _) = trimmed.canonical().expect("core graph must be connected, based and proper");
        let generators = spanning_tree_basis(&graph);
        Subgroup { alphabet: graph.alphabet(), generators, graph }
    }

    pub fn trivial(alphabet: Alphabet) -> Self {
        Subgroup { alphabet, generators: Vec::new(), graph: LabeledGraph::point(alphabet) }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        (1 - self.graph.euler_characteristic()) as usize
    }

    pub fn is_trivial(&self) -> bool {
        self.graph.edge_count() == 0
    }

    pub fn basepoint(&self) -> usize {
        self.graph.basepoint().expect("subgroup graphs are based")
    }

    pub fn contains(&self, word: &Word) -> bool {
        word.alphabet() == self.alphabet && self.graph.trace(self.basepoint(), word) == Ok(self.basepoint())
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        spanning_tree_basis(&self.graph)
    }

    pub fn to_spec(&self) -> SubgroupSpec {
        SubgroupSpec {
            alphabet_rank: self.alphabet.rank(),
            generators: self.generators.iter().map(Word::to_string).collect(),
        }
    }

    /// `H^g = g H g⁻¹`.
    pub fn conjugate(&self, by: &Word) -> Result<Subgroup, SubgroupError> {
        let generators = self.generators.iter().map(|w| w.conjugate(by)).collect::<Result<Vec<_>, _>>()?;
        Subgroup::from_generators(self.alphabet, generators)
    }

    /// Image under `a ↦ a²`, `b ↦ aba⁻¹b⁻¹`. Every branch vertex of the
    /// result is 3-valent and no edge is a loop.
    pub fn three_regularize(&self) -> Result<Subgroup, SubgroupError> {
        let generators = self.generators.iter().map(Word::phi_square_embed).collect::<Result<Vec<_>, _>>()?;
        Subgroup::from_generators(self.alphabet, generators)
    }

    /// Image under the endomorphism squaring every generator.
    pub fn square_generators(&self) -> Subgroup {
        let generators = self.generators.iter().map(Word::square_generators).collect();
        Subgroup::from_generators(self.alphabet, generators).expect("same alphabet")
    }

    /// Image under generator `i ↦ aⁱ b a⁻ⁱ` in the rank-2 free group.
    pub fn embed_into_rank2(&self) -> Subgroup {
        let generators = self.generators.iter().map(Word::embed_into_rank2).collect();
        Subgroup::from_generators(Alphabet::rank_two(), generators).expect("rank-2 images")
    }
}

fn spanning_tree_basis(graph: &LabeledGraph) -> Vec<Word> {
    let Some(base) = graph.basepoint() else {
        return Vec::new();
    };
    let tree = graph.bfs_tree(base);
    let tree_edges: Vec<bool> = {
        let mut used = vec![false; graph.edge_count()];
        for h in tree.iter().flatten() {
            used[h.edge] = true;
        }
        used
    };
    let to = |v: usize| graph.path_word(&graph.tree_path(&tree, base, v));
    graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !tree_edges[*i])
        .map(|(_, e)| {
            let letter =
                Word::reduce(graph.alphabet(), [crate::word::Letter::generator(e.label)]).expect("valid label");
            to(e.source).concat(&letter).and_then(|w| w.concat(&to(e.target).inverse())).expect("same alphabet")
        })
        .collect()
}

/// A pair conjugated by a common element so that neither core, nor the core
/// of their intersection, has an extremal vertex.
#[derive(Debug, Clone)]
pub struct NormalizedPair {
    pub h: Subgroup,
    pub k: Subgroup,
    /// `v` with `h = H^v`, `k = K^v`.
    pub conjugator: Word,
}

/// Conjugates `(H, K)` by `v = w⁻¹`, where `w` labels a shortest path in the
/// based component of the fiber product from `(∗, ∗)` to a vertex lying on a
/// reduced cycle. Both projections of that vertex then lie on reduced
/// cycles, so rebasing there removes every extremal vertex. The pair is
/// returned unchanged when nothing is extremal to begin with.
pub fn normalize_nonextremal(h: &Subgroup, k: &Subgroup) -> Result<NormalizedPair, SubgroupError> {
    h.alphabet.check(k.alphabet)?;
    let fp = product::based_fiber_product(h, k)?;
    let meet = fp.graph.trim_to_core().graph;
    if meet.edge_count() == 0 {
        return Err(SubgroupError::TrivialIntersection);
    }
    let identity = Word::identity(h.alphabet);
    if [h.graph(), k.graph(), &meet].iter().all(|g| g.stats().extremal_count == 0) {
        return Ok(NormalizedPair { h: h.clone(), k: k.clone(), conjugator: identity });
    }
    let cyclic = fp.graph.unbased_core();
    let base = fp.graph.basepoint().expect("based fiber product");
    let tree = fp.graph.bfs_tree(base);
    // BFS discovery order is the canonical (label, direction) order, so the
    // first reachable cyclic vertex at minimum depth is deterministic.
    let target = bfs_order(&fp.graph, base)
        .into_iter()
        .find(|&v| cyclic.vertex_map[v].is_some())
        .expect("nontrivial intersection has a cycle");
    let w = fp.graph.path_word(&fp.graph.tree_path(&tree, base, target));
    let v = w.inverse();
    Ok(NormalizedPair { h: h.conjugate(&v)?, k: k.conjugate(&v)?, conjugator: v })
}

fn bfs_order(graph: &LabeledGraph, root: usize) -> Vec<usize> {
    let mut seen = vec![false; graph.vertex_count()];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &h in graph.star(v) {
            let u = graph.opposite(h);
            if !seen[u] {
                seen[u] = true;
                order.push(u);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::rank_two()
    }

    fn sub(gens: &[&str]) -> Subgroup {
        Subgroup::parse(ab(), gens).unwrap()
    }

    fn w(text: &str) -> Word {
        Word::parse(ab(), text).unwrap()
    }

    #[test]
    fn subgroup_graph_examples() {
        assert_eq!(sub(&["a", "bab"]).rank(), 2);
        let trivial = sub(&[]);
        assert_eq!((trivial.rank(), trivial.graph().vertex_count()), (0, 1));
        assert!(trivial.is_trivial());
        // (b²a²)^{ab²} = ab²·b²a²·b⁻²a⁻¹
        let k = sub(&["aaba", "abbbbaaBBA"]);
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn graph_is_independent_of_order_and_inversion() {
        assert_eq!(sub(&["ab", "bbA"]), sub(&["aBB", "BA"]));
        assert_eq!(sub(&["a", "a", "aa"]), sub(&["A"]));
        assert_ne!(sub(&["a"]), sub(&["aa"]));
    }

    #[test]
    fn membership_examples() {
        assert!(sub(&["a"]).contains(&w("aaaaa")));
        assert!(!sub(&["a"]).contains(&w("ab")));
        let h = sub(&["a", "bab"]);
        assert!(h.contains(&w("babaBAB")));
        assert!(h.contains(&w("")));
        assert!(!h.contains(&w("b")));
    }

    #[test]
    fn basis_examples() {
        let h = sub(&["a", "aa"]);
        let basis = h.basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(Subgroup::from_generators(ab(), basis).unwrap(), sub(&["a"]));
        assert!(sub(&[]).basis().is_empty());
        let h = sub(&["aab", "bAbb", "abab"]);
        let basis = h.basis();
        assert_eq!(basis.len(), h.rank());
        assert!(basis.iter().all(|b| h.contains(b)));
        assert_eq!(Subgroup::from_generators(ab(), basis).unwrap(), h);
    }

    #[test]
    fn from_core_graph_round_trips() {
        let h = sub(&["abA", "bb"]);
        let again = Subgroup::from_core_graph(h.graph());
        assert_eq!(again, h);
        assert_eq!(again.generators().len(), h.rank());
    }

    #[test]
    fn three_regularize_examples() {
        let f = sub(&["a", "b"]).three_regularize().unwrap();
        assert_eq!(f, sub(&["aa", "abAB"]));
        assert_eq!(f.rank(), 2);
        assert!(f.graph().branch_vertices().iter().all(|&v| f.graph().valence(v) == 3));
        assert!(sub(&[]).three_regularize().unwrap().is_trivial());
        let big = Alphabet::new(3).unwrap();
        let h3 = Subgroup::parse(big, &["c"]).unwrap();
        assert!(matches!(h3.three_regularize(), Err(SubgroupError::Word(WordError::RankNotTwo(3)))));
    }

    #[test]
    fn three_regular_branch_types() {
        // The image of the whole group has exactly two branch vertices, both
        // with stars {a-in, a-out, b-out}.
        let f = sub(&["a", "b"]).three_regularize().unwrap();
        let g = f.graph();
        let branch = g.branch_vertices();
        assert_eq!(branch.len(), 2);
        let types: Vec<_> = branch.iter().map(|&v| g.vertex_type(v)).collect();
        assert!(crate::graph::same_type(&types[0], &types[1]));
        for t in &types {
            assert!(t.0.contains(&(0, crate::graph::Direction::Incoming)));
            assert!(t.0.contains(&(0, crate::graph::Direction::Outgoing)));
            assert!(t.0.contains(&(1, crate::graph::Direction::Outgoing)));
        }
        // no loops
        assert!(g.edges().iter().all(|e| e.source != e.target));
    }

    #[test]
    fn embedding_of_rank_three_generators() {
        let big = Alphabet::new(3).unwrap();
        let f3 = Subgroup::parse(big, &["a", "b", "c"]).unwrap();
        assert_eq!(f3.embed_into_rank2().rank(), 3);
    }

    #[test]
    fn normalize_leaves_extremal_free_pairs_alone() {
        let h = sub(&["a", "b"]);
        let n = normalize_nonextremal(&h, &h).unwrap();
        assert!(n.conjugator.is_identity());
        assert_eq!(n.h, h);
    }

    #[test]
    fn normalize_removes_hairs_and_keeps_ranks() {
        // both bases sit on hairs
        let h = sub(&["baB", "bbaBB"]);
        let k = sub(&["baaB"]);
        assert!(h.graph().stats().extremal_count > 0);
        let n = normalize_nonextremal(&h, &k).unwrap();
        assert_eq!(n.h.graph().stats().extremal_count, 0);
        assert_eq!(n.k.graph().stats().extremal_count, 0);
        assert_eq!((n.h.rank(), n.k.rank()), (h.rank(), k.rank()));
        assert_eq!(n.h, h.conjugate(&n.conjugator).unwrap());
    }

    #[test]
    fn normalize_rejects_trivial_intersections() {
        assert_eq!(normalize_nonextremal(&sub(&["a"]), &sub(&["b"])).unwrap_err(), SubgroupError::TrivialIntersection);
    }

    #[test]
    fn spec_json() {
        let spec: SubgroupSpec = serde_json::from_str(r#"{"generators":["a","bab"]}"#).unwrap();
        assert_eq!(spec.alphabet_rank, 2);
        assert_eq!(spec.to_subgroup().unwrap().rank(), 2);
        let bad: SubgroupSpec = serde_json::from_str(r#"{"generators":["a","bcb"]}"#).unwrap();
        assert!(matches!(bad.to_subgroup(), Err(SubgroupError::Generator { index: 1, .. })));
    }
}
