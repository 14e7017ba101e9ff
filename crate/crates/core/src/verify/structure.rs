use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::matrix::{self, MatrixError};
use crate::product::{self, PushoutResult, StarClasses};
use crate::subgroup::{self, Subgroup, SubgroupError};

/// Structure of the normalized pair: the pushout, its star classes, the
/// incidence matrix and `Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// `v` such that the checked pair is `(φ(H)^v, φ(K)^v)`.
    pub conjugator: String,
    pub rank_meet: usize,
    pub rank_join: usize,
    pub chi_t: i64,
    pub chi_join: i64,
    /// Classes of the equivalence generated by branch vertices of
    /// `Γ_{H∩K}`; the rows and columns of the normal form are grouped by it.
    pub star_class_count: usize,
    /// Classes of stars whose images coincide in `𝒯`.
    pub coincident_star_class_count: usize,
    pub ell: usize,
    pub p: usize,
    pub q: usize,
    pub entry_sum: usize,
    pub bound: Option<usize>,
    pub filled_block_sum: usize,
    pub delta_components: usize,
    pub delta_edges: usize,
    pub violations: Vec<String>,
}

/// Branch vertices of `𝒯` that are not the image of a branch vertex of
/// `Γ_H ⊔ Γ_K`.
fn special_vertices(t: &PushoutResult, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
    let mut covered = vec![false; t.graph.vertex_count()];
    for (g, class) in [(h.graph(), &t.h_vertex_class), (k.graph(), &t.k_vertex_class)] {
        for v in 0..g.vertex_count() {
            if g.valence(v) >= 3 {
                covered[class[v]] = true;
            }
        }
    }
    (0..t.graph.vertex_count()).filter(|&z| t.graph.valence(z) >= 3 && !covered[z]).collect()
}

fn valence_excess(t: &PushoutResult, stars: &StarClasses) -> Vec<String> {
    (0..t.graph.vertex_count())
        .filter(|&z| t.graph.valence(z) >= 3)
        .filter_map(|z| {
            let (val, classes) = (t.graph.valence(z), stars.count_at(z));
            (val > 2 + classes).then(|| format!("𝒯 vertex {z} has valence {val} but {classes} star classes"))
        })
        .collect()
}

/// Stars in one linked class must also coincide in `𝒯`.
fn refinement_failures(fine: &StarClasses, coarse: &StarClasses) -> Vec<String> {
    let mut image = vec![None; fine.count()];
    let mut out = Vec::new();
    for (f, c) in fine.h.iter().zip(&coarse.h).chain(fine.k.iter().zip(&coarse.k)) {
        if let (Some(f), Some(c)) = (f, c) {
            match image[*f] {
                None => image[*f] = Some(*c),
                Some(prev) if prev != *c => out.push(format!("linked star class {f} spans coincidence classes")),
                Some(_) => {}
            }
        }
    }
    out
}

/// Three-regularizes and normalizes the pair, then checks everything the
/// structure theory predicts. `None` when `H ∩ K = 1`.
pub fn check_structure(h: &Subgroup, k: &Subgroup) -> Result<Option<StructureReport>, VerifyError> {
    let (h3, k3) = (h.three_regularize()?, k.three_regularize()?);
    let pair = match subgroup::normalize_nonextremal(&h3, &k3) {
        Ok(pair) => pair,
        Err(SubgroupError::TrivialIntersection) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let (h, k) = (&pair.h, &pair.k);
    let meet = product::based_fiber_product(h, k)?.based_core();
    let rank_meet = meet.rank() as usize;
    let join = product::join(h, k)?;
    let t = product::topological_pushout(h, k, std::slice::from_ref(&meet))?;
    let coincident = t.star_classes(h.graph(), k.graph());
    let stars = t.linked_star_classes(h.graph(), k.graph(), std::slice::from_ref(&meet));
    let chi_t = t.graph.euler_characteristic();
    let chi_join = join.graph().euler_characteristic();
    let mut violations = Vec::new();

    if chi_t > chi_join {
        violations.push(format!("χ(𝒯) = {chi_t} exceeds χ(join) = {chi_join}"));
    }
    if !t.folded_core().is_based_isomorphic(join.graph()) {
        violations.push("𝒯 does not fold onto the join core".into());
    }
    for z in special_vertices(&t, h, k) {
        violations.push(format!("𝒯 vertex {z} is special"));
    }
    violations.extend(valence_excess(&t, &coincident));
    if -2 * chi_t > coincident.count() as i64 {
        violations.push(format!("−2χ(𝒯) = {} exceeds the {} coincident star classes", -2 * chi_t, coincident.count()));
    }
    violations.extend(refinement_failures(&stars, &coincident));

    let mut report = StructureReport {
        conjugator: pair.conjugator.to_string(),
        rank_meet,
        rank_join: join.rank(),
        chi_t,
        chi_join,
        star_class_count: stars.count(),
        coincident_star_class_count: coincident.count(),
        ell: 0,
        p: 0,
        q: 0,
        entry_sum: 0,
        bound: None,
        filled_block_sum: 0,
        delta_components: 0,
        delta_edges: 0,
        violations: Vec::new(),
    };
    let m = match matrix::incidence_matrix(h, k, &meet) {
        Ok(m) => m,
        Err(e) => {
            violations.push(format!("normalization left the pair unusable: {e}"));
            report.violations = violations;
            return Ok(Some(report));
        }
    };
    let nf = matrix::normal_form(&m, &stars)?;
    let (ell, p, q) = (nf.ell(), nf.p, nf.q);
    let entry_sum = m.entry_sum();
    violations.extend(nf.shape_violations(&m));
    if ell + p + q != stars.count() {
        violations.push(format!("ℓ + p + q = {} but there are {} star classes", ell + p + q, stars.count()));
    }
    if entry_sum != meet.graph.branch_vertices().len() {
        violations.push("entry-sum differs from the branch count of the intersection".into());
    }
    if entry_sum as i64 != -2 * meet.graph.euler_characteristic() {
        violations.push(format!("entry-sum {entry_sum} differs from −2χ(Γ_{{H∩K}})"));
    }
    let bound = if ell >= 1 {
        match matrix::entry_sum_bound(h.rank(), k.rank(), ell, p, q) {
            Ok(b) => {
                if entry_sum > b {
                    violations.push(format!("entry-sum {entry_sum} exceeds the bound {b}"));
                }
                if nf.filled_block_sum() > b {
                    violations.push(format!("filled blocks sum to {} above the bound {b}", nf.filled_block_sum()));
                }
                Some(b)
            }
            Err(MatrixError::BoundPrecondition(why)) => {
                violations.push(format!("bound precondition fails: {why}"));
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    if m.rows() > 0 && m.cols() > 0 && p == 0 && q == 0 && ell <= 1 {
        violations.push(format!("p = q = 0 with ℓ = {ell}"));
    }
    let delta = matrix::bipartite_delta(&m);
    if delta.component_count != ell + p + q {
        violations.push(format!("Δ has {} components, ℓ + p + q = {}", delta.component_count, ell + p + q));
    }
    if delta.edge_count != 2 * rank_meet - 2 {
        violations.push(format!("Δ has {} edges, 2·rank(H∩K) − 2 = {}", delta.edge_count, 2 * rank_meet - 2));
    }
    report.ell = ell;
    report.p = p;
    report.q = q;
    report.entry_sum = entry_sum;
    report.bound = bound;
    report.filled_block_sum = nf.filled_block_sum();
    report.delta_components = delta.component_count;
    report.delta_edges = delta.edge_count;
    report.violations = violations;
    Ok(Some(report))
}
