//! Fixed instances with known answers.

use serde::Serialize;

use super::fuzz::{random_pair, FuzzConfig};
use super::{check_instance, meet_and_join_ranks, VerifyError};
use crate::graph::LabeledGraph;
use crate::product::{self, CoreMap};
use crate::subgroup::Subgroup;
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn equal<T: PartialEq + std::fmt::Debug>(name: impl Into<String>, got: T, want: T) -> Self {
        let passed = got == want;
        Check::new(name, passed, format!("got {got:?}, expected {want:?}"))
    }
}

fn sub(rank: u32, gens: &[&str]) -> Subgroup {
    Subgroup::parse(Alphabet::new(rank).expect("positive rank"), gens).expect("corpus words parse")
}

fn rotations_match(x: &Word, y: &Word) -> bool {
    let (x, y) = (x.cyclic_reduction(), y.cyclic_reduction());
    if x.len() != y.len() {
        return false;
    }
    if x.is_identity() {
        return true;
    }
    let doubled: Vec<_> = x.letters().iter().chain(x.letters()).copied().collect();
    doubled.windows(y.len()).any(|w| w == y.letters())
}

/// Whether `x` is conjugate to `y` or to `y⁻¹`.
pub(crate) fn conjugate_up_to_inverse(x: &Word, y: &Word) -> bool {
    rotations_match(x, y) || rotations_match(x, &y.inverse())
}

pub(crate) fn worked_pair() -> (Subgroup, Subgroup) {
    let ab = Alphabet::rank_two();
    let w = |t: &str| Word::parse(ab, t).expect("fixed word");
    let h = vec![w("aBBa"), w("bAA").conjugate(&w("ab")).unwrap(), w("a").conjugate(&w("AB")).unwrap()];
    let k = vec![w("aaba"), w("bbaa").conjugate(&w("abb")).unwrap()];
    (Subgroup::from_generators(ab, h).unwrap(), Subgroup::from_generators(ab, k).unwrap())
}

pub fn check_worked_pair() -> Result<Vec<Check>, VerifyError> {
    let (h, k) = worked_pair();
    let report = check_instance(&h, &k)?;
    let meet = product::intersection(&h, &k)?;
    let expected = Word::parse(Alphabet::rank_two(), "abbAABBBBaba").expect("fixed word");
    let generator_ok = meet.basis().len() == 1 && conjugate_up_to_inverse(&meet.basis()[0], &expected);
    Ok(vec![
        Check::equal("worked pair: rank(H∩K)", report.rank_meet, 1),
        Check::new(
            "worked pair: H∩K generator",
            generator_ok,
            format!("basis {:?}", meet.basis().iter().map(Word::to_string).collect::<Vec<_>>()),
        ),
        Check::equal("worked pair: rank(H∨K)", report.rank_join, 2),
        Check::equal("worked pair: χ(𝒯)", report.chi_t, -3),
        Check::equal("worked pair: χ(Γ_{H∨K})", report.chi_join, -1),
        Check::new("worked pair: verdicts", !report.failed(), format!("{:?}", report.verdicts)),
    ])
}

/// Witness pairs `(name, m, n, H, K)` attaining `rank(H∩K) = m`,
/// `rank(H∨K) = n` for each admissible `(m, n)`.
pub(crate) fn sharpness_witnesses() -> Vec<(&'static str, usize, usize, Subgroup, Subgroup)> {
    vec![
        ("(2,2) H = K = ⟨a, bab⟩", 2, 2, sub(2, &["a", "bab"]), sub(2, &["a", "bab"])),
        ("(1,2) ⟨a, bab⟩, ⟨b, a²⟩", 1, 2, sub(2, &["a", "bab"]), sub(2, &["b", "aa"])),
        ("(0,2) ⟨a, bab⟩, ⟨b, ab⁻¹aba⁻¹⟩", 0, 2, sub(2, &["a", "bab"]), sub(2, &["b", "aBabA"])),
        (
            "(1,3) ⟨a, b⟩, ⟨b, c⟩ embedded",
            1,
            3,
            sub(3, &["a", "b"]).embed_into_rank2(),
            sub(3, &["b", "c"]).embed_into_rank2(),
        ),
        (
            "(0,3) ⟨c, a⁻¹ba⟩, ⟨a, b⁻¹cb⟩ embedded",
            0,
            3,
            sub(3, &["c", "Aba"]).embed_into_rank2(),
            sub(3, &["a", "Bcb"]).embed_into_rank2(),
        ),
        (
            "(0,4) ⟨a, b⟩, ⟨c, d⟩ embedded",
            0,
            4,
            sub(4, &["a", "b"]).embed_into_rank2(),
            sub(4, &["c", "d"]).embed_into_rank2(),
        ),
    ]
}

pub fn check_sharpness_suite() -> Result<Vec<Check>, VerifyError> {
    let mut checks = Vec::new();
    for (name, m, n, h, k) in sharpness_witnesses() {
        let report = check_instance(&h, &k)?;
        checks.push(Check::equal(
            format!("sharpness {name}"),
            (report.rank_meet, report.rank_join, report.failed()),
            (m, n, false),
        ));
    }
    let config =
        FuzzConfig { seed: 4, min_gens: 2, max_gens: 2, max_len: 4, exact_rank: Some(2), ..FuzzConfig::default() };
    let (mut seen, mut bad) = (0, 0);
    for i in 0..400 {
        let (h, k) = random_pair(&config, i);
        let (meet, join) = meet_and_join_ranks(&h, &k)?;
        if join == 4 {
            seen += 1;
            bad += usize::from(meet != 0);
        }
    }
    checks.push(Check::new(
        "sharpness: join rank 4 forces H∩K = 1",
        seen > 0 && bad == 0,
        format!("{seen} of 400 rank-2 pairs have join rank 4, {bad} with nontrivial meet"),
    ));
    Ok(checks)
}

/// Index-2 subgroups containing `a` and `b` respectively.
pub(crate) fn squares_base_pair() -> (Subgroup, Subgroup) {
    (sub(2, &["a", "bb", "baB"]), sub(2, &["b", "aa", "abA"]))
}

fn covers_rose(g: &LabeledGraph) -> bool {
    let full = 2 * g.alphabet().rank() as usize;
    g.is_properly_labeled() && (0..g.vertex_count()).all(|v| g.valence(v) == full)
}

/// Center of a length-2 segment labeled `x²`, `x` given by its label.
fn is_square_center(g: &LabeledGraph, v: usize, label: u32) -> bool {
    g.valence(v) == 2 && g.star(v).iter().all(|h| g.edge(h.edge).label == label)
}

pub fn check_squares_construction() -> Result<Vec<Check>, VerifyError> {
    let (a, b) = squares_base_pair();
    let mut checks = vec![Check::new(
        "squares: A and B have finite index",
        covers_rose(a.graph()) && covers_rose(b.graph()),
        format!("indices {} and {}", a.graph().vertex_count(), b.graph().vertex_count()),
    )];

    let t_ab = product::topological_pushout(&a, &b, &[product::based_fiber_product(&a, &b)?.based_core()])?;
    checks.push(Check::equal(
        "squares: 𝒯(A, B) is a wedge of two circles",
        (t_ab.graph.vertex_count(), t_ab.graph.edge_count()),
        (1, 2),
    ));

    let (h, k) = (a.square_generators(), b.square_generators());
    let t_hk = product::topological_pushout(&h, &k, &[product::based_fiber_product(&h, &k)?.based_core()])?;
    checks.push(Check::equal("squares: χ(𝒯(H, K))", t_hk.graph.euler_characteristic(), -1));
    let labels: Vec<u32> = t_hk.graph.edges().iter().map(|e| e.label).collect();
    checks.push(Check::new(
        "squares: 𝒯(H, K) has circles labeled a² and b²",
        t_hk.graph.edge_count() == 4
            && labels.iter().filter(|&&l| l == 0).count() == 2
            && t_hk.graph.vertex_count() == 3,
        format!("{} vertices, labels {labels:?}", t_hk.graph.vertex_count()),
    ));

    let fp = product::fiber_product(&h, &k)?;
    let centers: Vec<(usize, usize)> = product::isolated_vertex_scan(&fp)
        .into_iter()
        .map(|v| fp.coordinates[v])
        .filter(|&(x, y)| is_square_center(h.graph(), x, 0) && is_square_center(k.graph(), y, 1))
        .collect();
    checks.push(Check::new(
        "squares: isolated fiber-product vertex at two square centers",
        !centers.is_empty(),
        format!("{centers:?}"),
    ));

    // Rebase H at the center of its a² loop and K at the center of its b²
    // loop. From the basepoint, `a` and `b` reach those centers.
    let ab = Alphabet::rank_two();
    let (u, v) = (Word::parse(ab, "A").expect("letter"), Word::parse(ab, "B").expect("letter"));
    let (hu, kv) = (h.conjugate(&u)?, k.conjugate(&v)?);
    let x = h.graph().trace(h.basepoint(), &u.inverse()).ok();
    let y = k.graph().trace(k.basepoint(), &v.inverse()).ok();
    checks.push(Check::new(
        "squares: u and v move the basepoints to the isolated pair",
        matches!((x, y), (Some(x), Some(y)) if centers.contains(&(x, y))),
        format!("{x:?}, {y:?}"),
    ));
    checks.push(Check::new(
        "squares: conjugation keeps both graphs",
        hu.graph().canonical_unbased() == h.graph().canonical_unbased()
            && kv.graph().canonical_unbased() == k.graph().canonical_unbased(),
        String::new(),
    ));
    let meet_uv = product::intersection(&hu, &kv)?;
    checks.push(Check::equal("squares: H^u ∩ K^v", meet_uv.rank(), 0));
    let t_uv = product::topological_pushout(&hu, &kv, &[CoreMap::basepoints(&hu, &kv)])?;
    let join_uv = product::join(&hu, &kv)?;
    checks.push(Check::new(
        "squares: 𝒯^{uv} equals Γ_{H^u ∨ K^v}",
        t_uv.graph.is_based_isomorphic(join_uv.graph()),
        format!(
            "χ(𝒯^{{uv}}) = {}, χ(join) = {}",
            t_uv.graph.euler_characteristic(),
            join_uv.graph().euler_characteristic()
        ),
    ));
    checks.push(Check::equal("squares: rank(H^u ∨ K^v) = h + k", join_uv.rank(), hu.rank() + kv.rank()));

    let mut cores = product::double_cosets(&hu, &kv)?.cores();
    cores.push(CoreMap::basepoints(&hu, &kv));
    let t_all = product::topological_pushout(&hu, &kv, &cores)?;
    checks.push(Check::new(
        "squares: pushout along every nontrivial intersection and the point has at most four edges",
        t_all.graph.edge_count() <= 4,
        format!(
            "{} edges, χ = {}, χ(join) = {}",
            t_all.graph.edge_count(),
            t_all.graph.euler_characteristic(),
            join_uv.graph().euler_characteristic()
        ),
    ));
    Ok(checks)
}

/// Preimage of one vertex `z` of the folded wedge, split by pushout class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub join_vertex: usize,
    pub h_vertices: Vec<usize>,
    pub k_vertices: Vec<usize>,
    pub classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub fibers: Vec<FiberReport>,
    /// Fibers meeting at least two pushout classes.
    pub split_fibers: usize,
    /// Vertices of `Γ_H` and of `Γ_K` in the class of the basepoints.
    pub basepoint_class: (Vec<usize>, Vec<usize>),
}

/// For each vertex of the folded wedge, the pushout classes (along
/// `Γ_{H∩K}`) its preimage in `Γ_H ⊔ Γ_K` meets.
pub fn imrich_muller_probe(h: &Subgroup, k: &Subgroup) -> Result<ProbeReport, VerifyError> {
    let meet = product::based_fiber_product(h, k)?.based_core();
    let t = product::topological_pushout(h, k, &[meet])?;
    let wedge = product::folded_wedge(h, k)?;
    let nh = h.graph().vertex_count();
    let mut fibers: Vec<FiberReport> = (0..wedge.graph.vertex_count())
        .map(|z| FiberReport { join_vertex: z, h_vertices: Vec::new(), k_vertices: Vec::new(), classes: 0 })
        .collect();
    for (i, &z) in wedge.vertex_map.iter().enumerate() {
        if i < nh {
            fibers[z].h_vertices.push(i);
        } else {
            fibers[z].k_vertices.push(i - nh);
        }
    }
    for f in &mut fibers {
        let mut classes: Vec<usize> = f
            .h_vertices
            .iter()
            .map(|&x| t.h_vertex_class[x])
            .chain(f.k_vertices.iter().map(|&y| t.k_vertex_class[y]))
            .collect();
        classes.sort_unstable();
        classes.dedup();
        f.classes = classes.len();
    }
    let base = t.h_vertex_class[h.basepoint()];
    let basepoint_class = (
        (0..nh).filter(|&x| t.h_vertex_class[x] == base).collect(),
        (0..k.graph().vertex_count()).filter(|&y| t.k_vertex_class[y] == base).collect(),
    );
    let split_fibers = fibers.iter().filter(|f| f.classes >= 2).count();
    Ok(ProbeReport { fibers, split_fibers, basepoint_class })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub checks: Vec<Check>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Every fixed check: the worked pair, the sharpness witnesses, the
/// squares construction and the probe on the worked pair.
pub fn run_corpus() -> Result<CorpusReport, VerifyError> {
    let mut checks = check_worked_pair()?;
    checks.extend(check_sharpness_suite()?);
    checks.extend(check_squares_construction()?);
    let (h, k) = worked_pair();
    let probe = imrich_muller_probe(&h, &k)?;
    checks.push(Check::new(
        "probe: worked pair has a single join vertex whose fiber splits",
        probe.fibers.len() == 1 && probe.split_fibers == 1 && probe.fibers[0].classes >= 2,
        format!(
            "{} fibers, classes {:?}",
            probe.fibers.len(),
            probe.fibers.iter().map(|f| f.classes).collect::<Vec<_>>()
        ),
    ));
    checks.push(Check::new(
        "probe: worked pair basepoints form their own class",
        probe.basepoint_class == (vec![h.basepoint()], vec![k.basepoint()]),
        format!("{:?}", probe.basepoint_class),
    ));
    Ok(CorpusReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_all(checks: &[Check]) {
        for c in checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn worked_pair_checks() {
        assert_all(&check_worked_pair().unwrap());
    }

    #[test]
    fn sharpness() {
        assert_all(&check_sharpness_suite().unwrap());
    }

    #[test]
    fn squares() {
        assert_all(&check_squares_construction().unwrap());
    }

    #[test]
    fn corpus_passes() {
        assert_all(&run_corpus().unwrap().checks);
    }

    #[test]
    fn conjugacy_up_to_inverse() {
        let ab = Alphabet::rank_two();
        let w = |t: &str| Word::parse(ab, t).unwrap();
        assert!(conjugate_up_to_inverse(&w("abAB"), &w("BAba")));
        assert!(conjugate_up_to_inverse(&w("aab"), &w("BAA")));
        assert!(conjugate_up_to_inverse(&w("baab"), &w("aabb")));
        assert!(!conjugate_up_to_inverse(&w("aab"), &w("abb")));
    }

    #[test]
    fn probe_on_equal_subgroups_has_single_classes() {
        let h = sub(2, &["aab", "bAb"]);
        let probe = imrich_muller_probe(&h, &h).unwrap();
        assert_eq!(probe.split_fibers, 0);
        assert!(probe.fibers.iter().all(|f| f.classes == 1));
    }
}
