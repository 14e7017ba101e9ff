//! Binary constructions on core graphs: the fiber product (pullback over
//! the rose), the join (folded wedge), and the topological pushout along
//! immersed cores.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::graph::{Direction, Edge, Folding, LabeledGraph};
use crate::subgroup::Subgroup;
use crate::word::{Letter, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("core {core}: {reason}")]
    IncompatibleMaps { core: usize, reason: String },
}

/// The pullback of `Γ_H → 𝒳 ← Γ_K`, either in full or just the component of
/// `(∗, ∗)`.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub graph: LabeledGraph,
    /// `(vertex of Γ_H, vertex of Γ_K)` per vertex.
    pub coordinates: Vec<(usize, usize)>,
    /// `(edge of Γ_H, edge of Γ_K)` per edge.
    pub edge_pairs: Vec<(usize, usize)>,
}

/// A graph together with labeled immersions into `Γ_H` and `Γ_K`.
#[derive(Debug, Clone)]
pub struct CoreMap {
    pub graph: LabeledGraph,
    pub vertex_to_h: Vec<usize>,
    pub vertex_to_k: Vec<usize>,
    pub edge_to_h: Vec<usize>,
    pub edge_to_k: Vec<usize>,
}

impl CoreMap {
    /// The one-point core sitting at both basepoints.
    pub fn basepoints(h: &Subgroup, k: &Subgroup) -> Self {
        CoreMap {
            graph: LabeledGraph::point(h.alphabet()),
            vertex_to_h: vec![h.basepoint()],
            vertex_to_k: vec![k.basepoint()],
            edge_to_h: Vec::new(),
            edge_to_k: Vec::new(),
        }
    }

    pub fn rank(&self) -> i64 {
        self.graph.stats().rank
    }
}

impl FiberProduct {
    /// The subgraph picked out by `restrict`, with its projections.
    fn core_map(&self, restriction: crate::graph::Restriction) -> CoreMap {
        let mut vertex_to_h = vec![0; restriction.graph.vertex_count()];
        let mut vertex_to_k = vec![0; restriction.graph.vertex_count()];
        for (v, image) in restriction.vertex_map.iter().enumerate() {
            if let Some(i) = image {
                (vertex_to_h[*i], vertex_to_k[*i]) = self.coordinates[v];
            }
        }
        let mut edge_to_h = vec![0; restriction.graph.edge_count()];
        let mut edge_to_k = vec![0; restriction.graph.edge_count()];
        for (e, image) in restriction.edge_map.iter().enumerate() {
            if let Some(i) = image {
                (edge_to_h[*i], edge_to_k[*i]) = self.edge_pairs[e];
            }
        }
        CoreMap { graph: restriction.graph, vertex_to_h, vertex_to_k, edge_to_h, edge_to_k }
    }

    /// `Γ_{H∩K}`: the based component trimmed to its core, with projections.
    pub fn based_core(&self) -> CoreMap {
        let component = self.graph.based_component();
        let core = component.graph.trim_to_core();
        let composed = compose(&component, &core);
        self.core_map(composed)
    }

    /// The core of every component carrying a nontrivial subgroup, in order
    /// of each component's first vertex. These are the unbased graphs of the
    /// nontrivial `H ∩ K^g` over double cosets `HgK`.
    pub fn component_cores(&self) -> Vec<(CoreMap, bool)> {
        let (count, comp) = self.graph.components();
        let base_comp = self.graph.basepoint().map(|b| comp[b]);
        (0..count)
            .filter_map(|c| {
                let keep: Vec<bool> = comp.iter().map(|&x| x == c).collect();
                let component = self.graph.restrict(&keep);
                let core = component.graph.unbased_core();
                if core.graph.edge_count() == 0 {
                    return None;
                }
                Some((self.core_map(compose(&component, &core)), Some(c) == base_comp))
            })
            .collect()
    }

    /// Vertices with no incident edges.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.graph.vertex_count()).filter(|&v| self.graph.valence(v) == 0).collect()
    }
}

fn compose(outer: &crate::graph::Restriction, inner: &crate::graph::Restriction) -> crate::graph::Restriction {
    crate::graph::Restriction {
        graph: inner.graph.clone(),
        vertex_map: outer.vertex_map.iter().map(|m| m.and_then(|i| inner.vertex_map[i])).collect(),
        edge_map: outer.edge_map.iter().map(|m| m.and_then(|i| inner.edge_map[i])).collect(),
    }
}

/// Every vertex of `V(Γ_H) × V(Γ_K)`; vertex `(x, y)` has index
/// `x * |V(Γ_K)| + y`.
pub fn fiber_product(h: &Subgroup, k: &Subgroup) -> Result<FiberProduct, ProductError> {
    h.alphabet().check(k.alphabet())?;
    let (gh, gk) = (h.graph(), k.graph());
    let nk = gk.vertex_count();
    let coordinates: Vec<(usize, usize)> = (0..gh.vertex_count()).flat_map(|x| (0..nk).map(move |y| (x, y))).collect();
    let mut by_label: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (j, e) in gk.edges().iter().enumerate() {
        by_label.entry(e.label).or_default().push(j);
    }
    let mut edges = Vec::new();
    let mut edge_pairs = Vec::new();
    for (i, eh) in gh.edges().iter().enumerate() {
        for &j in by_label.get(&eh.label).map(Vec::as_slice).unwrap_or(&[]) {
            let ek = gk.edge(j);
            edges.push(Edge {
                source: eh.source * nk + ek.source,
                label: eh.label,
                target: eh.target * nk + ek.target,
            });
            edge_pairs.push((i, j));
        }
    }
    let basepoint = Some(h.basepoint() * nk + k.basepoint());
    let graph =
        LabeledGraph::new(h.alphabet(), coordinates.len(), edges, basepoint).expect("product edges are well formed");
    Ok(FiberProduct { graph, coordinates, edge_pairs })
}

/// Only the component of `(∗, ∗)`, explored outward from it.
pub fn based_fiber_product(h: &Subgroup, k: &Subgroup) -> Result<FiberProduct, ProductError> {
    h.alphabet().check(k.alphabet())?;
    let (gh, gk) = (h.graph(), k.graph());
    let start = (h.basepoint(), k.basepoint());
    let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::from([(start, 0)]);
    let mut coordinates = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some((x, y)) = queue.pop_front() {
        for &half in gh.star(x) {
            let label = gh.edge(half.edge).label;
            let letter = match half.direction {
                Direction::Outgoing => Letter::generator(label),
                Direction::Incoming => Letter::inverse_of(label),
            };
            if let Some((_, y2)) = gk.step(y, letter) {
                let next = (gh.opposite(half), y2);
                if let std::collections::btree_map::Entry::Vacant(e) = index.entry(next) {
                    e.insert(coordinates.len());
                    coordinates.push(next);
                    queue.push_back(next);
                }
            }
        }
    }
    let mut edges = Vec::new();
    let mut edge_pairs = Vec::new();
    for (v, &(x, y)) in coordinates.iter().enumerate() {
        for &half in gh.star(x) {
            if half.direction != Direction::Outgoing {
                continue;
            }
            let eh = gh.edge(half.edge);
            if let Some((j, y2)) = gk.step(y, Letter::generator(eh.label)) {
                edges.push(Edge { source: v, label: eh.label, target: index[&(eh.target, y2)] });
                edge_pairs.push((half.edge, j));
            }
        }
    }
    let graph =
        LabeledGraph::new(h.alphabet(), coordinates.len(), edges, Some(0)).expect("product edges are well formed");
    Ok(FiberProduct { graph, coordinates, edge_pairs })
}

pub fn intersection(h: &Subgroup, k: &Subgroup) -> Result<Subgroup, ProductError> {
    let fp = based_fiber_product(h, k)?;
    Ok(Subgroup::from_core_graph(&fp.based_core().graph))
}

/// The wedge of `Γ_H` and `Γ_K` at their basepoints, folded. Vertex and edge
/// maps index `Γ_H` first, then `Γ_K`.
pub fn folded_wedge(h: &Subgroup, k: &Subgroup) -> Result<Folding, ProductError> {
    h.alphabet().check(k.alphabet())?;
    let (gh, gk) = (h.graph(), k.graph());
    let nh = gh.vertex_count();
    let kb = k.basepoint();
    let k_vertex = |j: usize| match j.cmp(&kb) {
        std::cmp::Ordering::Equal => h.basepoint(),
        std::cmp::Ordering::Less => nh + j,
        std::cmp::Ordering::Greater => nh + j - 1,
    };
    let mut edges: Vec<Edge> = gh.edges().to_vec();
    edges.extend(gk.edges().iter().map(|e| Edge {
        source: k_vertex(e.source),
        label: e.label,
        target: k_vertex(e.target),
    }));
    let wedge = LabeledGraph::new(h.alphabet(), nh + gk.vertex_count() - 1, edges, Some(h.basepoint()))
        .expect("wedge is well formed");
    let mut folding = wedge.fold();
    let wedge_map = folding.vertex_map.clone();
    folding.vertex_map =
        (0..nh).map(|i| wedge_map[i]).chain((0..gk.vertex_count()).map(|j| wedge_map[k_vertex(j)])).collect();
    Ok(folding)
}

pub fn join(h: &Subgroup, k: &Subgroup) -> Result<Subgroup, ProductError> {
    Ok(Subgroup::from_core_graph(&folded_wedge(h, k)?.graph))
}

/// `𝒯`: the quotient of `Γ_H ⊔ Γ_K` by the equivalence generated by
/// `Π_H(c) ∼ Π_K(c)` for every vertex and edge `c` of the supplied cores.
#[derive(Debug, Clone)]
pub struct PushoutResult {
    pub graph: LabeledGraph,
    pub h_vertex_class: Vec<usize>,
    pub k_vertex_class: Vec<usize>,
    pub h_edge_class: Vec<usize>,
    pub k_edge_class: Vec<usize>,
}

/// A partition of the 3-valent stars of `Γ_H ⊔ Γ_K`, one entry per vertex
/// (`None` for vertices of other valence).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarClasses {
    pub h: Vec<Option<usize>>,
    pub k: Vec<Option<usize>>,
    /// `𝒯`-vertex of each class.
    pub center: Vec<usize>,
}

impl StarClasses {
    pub fn count(&self) -> usize {
        self.center.len()
    }

    /// Number of classes whose center is `z`.
    pub fn count_at(&self, z: usize) -> usize {
        self.center.iter().filter(|&&c| c == z).count()
    }
}

impl PushoutResult {
    /// Stars are equivalent when their centers and their three half-edges
    /// (edge class and direction) coincide in `𝒯`.
    pub fn star_classes(&self, h: &LabeledGraph, k: &LabeledGraph) -> StarClasses {
        let mut keys: BTreeMap<(usize, Vec<(usize, Direction)>), usize> = BTreeMap::new();
        let mut center = Vec::new();
        let mut classify = |g: &LabeledGraph, vclass: &[usize], eclass: &[usize]| -> Vec<Option<usize>> {
            (0..g.vertex_count())
                .map(|v| {
                    if g.valence(v) != 3 {
                        return None;
                    }
                    let mut star: Vec<(usize, Direction)> =
                        g.star(v).iter().map(|h| (eclass[h.edge], h.direction)).collect();
                    star.sort();
                    let key = (vclass[v], star);
                    let next = keys.len();
                    let id = *keys.entry(key).or_insert_with(|| {
                        center.push(vclass[v]);
                        next
                    });
                    Some(id)
                })
                .collect()
        };
        let hc = classify(h, &self.h_vertex_class, &self.h_edge_class);
        let kc = classify(k, &self.k_vertex_class, &self.k_edge_class);
        StarClasses { h: hc, k: kc, center }
    }

    /// The equivalence on 3-valent stars generated by `star(x) ∼ star(y)`
    /// for every branch vertex `(x, y)` of the supplied cores, whose star
    /// maps isomorphically onto both. Finer than [`Self::star_classes`]:
    /// each class lies inside one coincidence class.
    pub fn linked_star_classes(&self, h: &LabeledGraph, k: &LabeledGraph, cores: &[CoreMap]) -> StarClasses {
        let nh = h.vertex_count();
        let mut sets = DisjointSets::new(nh + k.vertex_count());
        for core in cores {
            for v in core.graph.branch_vertices() {
                sets.union(core.vertex_to_h[v], nh + core.vertex_to_k[v]);
            }
        }
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut center = Vec::new();
        let mut assign = |v: usize, z: usize| {
            let root = sets.find(v);
            let next = ids.len();
            *ids.entry(root).or_insert_with(|| {
                center.push(z);
                next
            })
        };
        let hc = (0..nh).map(|x| (h.valence(x) == 3).then(|| assign(x, self.h_vertex_class[x]))).collect();
        let kc = (0..k.vertex_count())
            .map(|y| (k.valence(y) == 3).then(|| assign(nh + y, self.k_vertex_class[y])))
            .collect();
        StarClasses { h: hc, k: kc, center }
    }

    /// Folds `𝒯` from its basepoint and trims to the core.
    pub fn folded_core(&self) -> LabeledGraph {
        self.graph.fold().graph.based_component().graph.trim_to_core().graph
    }
}

pub fn topological_pushout(h: &Subgroup, k: &Subgroup, cores: &[CoreMap]) -> Result<PushoutResult, ProductError> {
    h.alphabet().check(k.alphabet())?;
    let (gh, gk) = (h.graph(), k.graph());
    let (nh, nk) = (gh.vertex_count(), gk.vertex_count());
    let (mh, mk) = (gh.edge_count(), gk.edge_count());
    for (i, core) in cores.iter().enumerate() {
        check_core(i, core, gh, gk)?;
    }
    let mut vertices = DisjointSets::new(nh + nk);
    let mut edges = DisjointSets::new(mh + mk);
    for core in cores {
        for v in 0..core.graph.vertex_count() {
            vertices.union(core.vertex_to_h[v], nh + core.vertex_to_k[v]);
        }
        for e in 0..core.graph.edge_count() {
            edges.union(core.edge_to_h[e], mh + core.edge_to_k[e]);
        }
    }
    let (vertex_count, vclass) = vertices.classes();
    let (edge_count, eclass) = edges.classes();
    let mut quotient: Vec<Option<Edge>> = vec![None; edge_count];
    let all_edges = gh.edges().iter().map(|e| (*e, 0)).chain(gk.edges().iter().map(|e| (*e, nh)));
    for (i, (e, offset)) in all_edges.enumerate() {
        quotient[eclass[i]].get_or_insert(Edge {
            source: vclass[offset + e.source],
            label: e.label,
            target: vclass[offset + e.target],
        });
    }
    let graph = LabeledGraph::new(
        h.alphabet(),
        vertex_count,
        quotient.into_iter().map(|e| e.expect("every class has a member")).collect(),
        Some(vclass[h.basepoint()]),
    )
    .expect("quotient is well formed");
    Ok(PushoutResult {
        graph,
        h_vertex_class: vclass[..nh].to_vec(),
        k_vertex_class: vclass[nh..].to_vec(),
        h_edge_class: eclass[..mh].to_vec(),
        k_edge_class: eclass[mh..].to_vec(),
    })
}

fn check_core(index: usize, core: &CoreMap, gh: &LabeledGraph, gk: &LabeledGraph) -> Result<(), ProductError> {
    let fail = |reason: String| Err(ProductError::IncompatibleMaps { core: index, reason });
    let (nv, ne) = (core.graph.vertex_count(), core.graph.edge_count());
    if core.vertex_to_h.len() != nv || core.vertex_to_k.len() != nv {
        return fail("vertex map length differs from the core".into());
    }
    if core.edge_to_h.len() != ne || core.edge_to_k.len() != ne {
        return fail("edge map length differs from the core".into());
    }
    for v in 0..nv {
        if core.vertex_to_h[v] >= gh.vertex_count() || core.vertex_to_k[v] >= gk.vertex_count() {
            return fail(format!("vertex {v} maps outside the factors"));
        }
    }
    for (i, e) in core.graph.edges().iter().enumerate() {
        for (target, map_v, map_e) in
            [(gh, &core.vertex_to_h, core.edge_to_h[i]), (gk, &core.vertex_to_k, core.edge_to_k[i])]
        {
            let Some(image) = target.edges().get(map_e) else {
                return fail(format!("edge {i} maps outside the factors"));
            };
            if image.label != e.label || image.source != map_v[e.source] || image.target != map_v[e.target] {
                return fail(format!("edge {i} is not sent to a matching edge"));
            }
        }
    }
    Ok(())
}

/// One nontrivial `H ∩ K^g`, as the unbased core of a fiber-product component.
#[derive(Debug, Clone)]
pub struct DoubleCosetEntry {
    pub core: CoreMap,
    pub rank: usize,
    pub contains_basepoint: bool,
}

#[derive(Debug, Clone)]
pub struct DoubleCosetDecomposition {
    pub entries: Vec<DoubleCosetEntry>,
}

impl DoubleCosetDecomposition {
    pub fn ranks(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.rank).collect()
    }

    /// `Σ (rank(H ∩ K^g) − 1)` over the nontrivial entries.
    pub fn reduced_rank_sum(&self) -> i64 {
        self.entries.iter().map(|e| e.rank as i64 - 1).sum()
    }

    pub fn cores(&self) -> Vec<CoreMap> {
        self.entries.iter().map(|e| e.core.clone()).collect()
    }
}

pub fn double_cosets(h: &Subgroup, k: &Subgroup) -> Result<DoubleCosetDecomposition, ProductError> {
    let fp = fiber_product(h, k)?;
    let entries = fp
        .component_cores()
        .into_iter()
        .map(|(core, contains_basepoint)| DoubleCosetEntry { rank: core.rank() as usize, core, contains_basepoint })
        .collect();
    Ok(DoubleCosetDecomposition { entries })
}

pub fn isolated_vertex_scan(fp: &FiberProduct) -> Vec<usize> {
    fp.isolated_vertices()
}
