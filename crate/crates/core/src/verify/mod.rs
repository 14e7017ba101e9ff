//! Rank inequalities and structural checks evaluated on concrete pairs.
//!
//! [`check_instance`] computes the ranks of `H ∩ K` and `H ∨ K`, the
//! double-coset ranks and the pushout along `Γ_{H∩K}`, then evaluates every
//! inequality as a three-valued [`Verdict`]. When the intersection is
//! nontrivial the pair is also normalized and run through the matrix and
//! pushout structure checks in [`structure`].

mod corpus;
mod fuzz;
mod structure;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::MatrixError;
use crate::product::{self, ProductError};
use crate::subgroup::{Subgroup, SubgroupError, SubgroupSpec};

pub use corpus::{
    check_sharpness_suite, check_squares_construction, check_worked_pair, imrich_muller_probe, run_corpus, Check,
    CorpusReport, FiberReport, ProbeReport,
};
pub use fuzz::{
    fuzz, fuzz_sequential, random_pair, random_subgroup, random_word, CampaignReport, CampaignSummary, FuzzConfig,
};
pub use structure::{check_structure, StructureReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{0} is the trivial subgroup")]
    TrivialInput(&'static str),
    #[error("checks need the rank-2 alphabet, got rank {0}")]
    AlphabetRank(u32),
    #[error(transparent)]
    Subgroup(#[from] SubgroupError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// Outcome of one inequality. `slack` is right side minus left side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slack: Option<i64>,
}

impl Verdict {
    pub fn inequality(lhs: i64, rhs: i64) -> Self {
        let slack = rhs - lhs;
        Verdict { status: if slack >= 0 { Status::Pass } else { Status::Fail }, slack: Some(slack) }
    }

    pub fn not_applicable() -> Self {
        Verdict { status: Status::NotApplicable, slack: None }
    }

    pub fn holds(ok: bool) -> Self {
        Verdict { status: if ok { Status::Pass } else { Status::Fail }, slack: None }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// `rank(H∩K) − 1 ≤ 2(h−1)(k−1)`.
    pub hanna_neumann: Verdict,
    /// `rank(H∩K) − 1 ≤ 2(h−1)(k−1) − min(h−1, k−1)`.
    pub burns: Verdict,
    /// The Burns bound for `Σ (rank(H∩K^g) − 1)` over double cosets.
    pub burns_sum: Verdict,
    /// With `h ≤ k` and `H∩K ≠ 1`:
    /// `rank(H∩K) − 1 ≤ 2(h−1)(k−1) − (h−1)(rank(H∨K) − 1)`.
    pub strong_burns: Verdict,
    /// When `2(rank(H∨K) − 1) ≥ h + k − 1`: `rank(H∩K) − 1 ≤ (h−1)(k−1)`.
    pub large_join: Verdict,
    /// When `h = k = 2`: `rank(H∩K) ≤ 4 − rank(H∨K)`.
    pub rank_two: Verdict,
    /// `χ(𝒯) ≤ χ(Γ_{H∨K})` and `𝒯` folds onto `Γ_{H∨K}`.
    pub pushout: Verdict,
    /// All structure checks on the normalized pair.
    pub structure: Verdict,
}

impl Verdicts {
    /// Evaluates every verdict from the numeric fields of a report.
    pub fn evaluate(report: &InstanceReport) -> Self {
        let h = report.h as i64;
        let k = report.k as i64;
        let meet = report.rank_meet as i64;
        let join = report.rank_join as i64;
        let hn = 2 * (h - 1) * (k - 1);
        let burns = hn - (h - 1).min(k - 1);
        let sum: i64 = report.double_coset_ranks.iter().map(|&r| r as i64 - 1).sum();
        let strong_burns = if meet >= 1 {
            let (small, large) = if h <= k { (h, k) } else { (k, h) };
            Verdict::inequality(meet - 1, 2 * (small - 1) * (large - 1) - (small - 1) * (join - 1))
        } else {
            Verdict::not_applicable()
        };
        let large_join = if 2 * (join - 1) >= h + k - 1 {
            Verdict::inequality(meet - 1, (h - 1) * (k - 1))
        } else {
            Verdict::not_applicable()
        };
        let rank_two = if h == 2 && k == 2 { Verdict::inequality(meet, 4 - join) } else { Verdict::not_applicable() };
        let structure = match &report.structure {
            None => Verdict::not_applicable(),
            Some(s) => Verdict::holds(s.violations.is_empty()),
        };
        Verdicts {
            hanna_neumann: Verdict::inequality(meet - 1, hn),
            burns: Verdict::inequality(meet - 1, burns),
            burns_sum: Verdict::inequality(sum, burns),
            strong_burns,
            large_join,
            rank_two,
            pushout: Verdict::holds(report.chi_t <= report.chi_join && report.pushout_folds_to_join),
            structure,
        }
    }

    pub fn named(&self) -> [(&'static str, Verdict); 8] {
        [
            ("hanna_neumann", self.hanna_neumann),
            ("burns", self.burns),
            ("burns_sum", self.burns_sum),
            ("strong_burns", self.strong_burns),
            ("large_join", self.large_join),
            ("rank_two", self.rank_two),
            ("pushout", self.pushout),
            ("structure", self.structure),
        ]
    }

    pub fn any_failed(&self) -> bool {
        self.named().iter().any(|(_, v)| v.failed())
    }
}

/// The two subgroups of an instance, as re-runnable JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSpec {
    pub h: SubgroupSpec,
    pub k: SubgroupSpec,
}

impl PairSpec {
    pub fn to_pair(&self) -> Result<(Subgroup, Subgroup), SubgroupError> {
        Ok((self.h.to_subgroup()?, self.k.to_subgroup()?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub input: PairSpec,
    pub h: usize,
    pub k: usize,
    pub rank_meet: usize,
    pub rank_join: usize,
    /// `χ(𝒯)` for the pushout along `Γ_{H∩K}` (a point when `H∩K = 1`).
    pub chi_t: i64,
    pub chi_join: i64,
    pub pushout_folds_to_join: bool,
    /// Ranks of the nontrivial `H ∩ K^g`, one per fiber-product component.
    pub double_coset_ranks: Vec<usize>,
    pub structure: Option<StructureReport>,
    pub verdicts: Verdicts,
}

impl InstanceReport {
    pub fn failed(&self) -> bool {
        self.verdicts.any_failed()
    }

    /// `ℓ, p, q` of the normalized pair, when there is one.
    pub fn normal_form(&self) -> Option<(usize, usize, usize)> {
        self.structure.as_ref().map(|s| (s.ell, s.p, s.q))
    }
}

/// Ranks of `H ∩ K` and `H ∨ K`.
pub fn meet_and_join_ranks(h: &Subgroup, k: &Subgroup) -> Result<(usize, usize), ProductError> {
    Ok((product::intersection(h, k)?.rank(), product::join(h, k)?.rank()))
}

pub fn check_instance(h: &Subgroup, k: &Subgroup) -> Result<InstanceReport, VerifyError> {
    if h.alphabet().rank() != 2 {
        return Err(VerifyError::AlphabetRank(h.alphabet().rank()));
    }
    if h.is_trivial() {
        return Err(VerifyError::TrivialInput("H"));
    }
    if k.is_trivial() {
        return Err(VerifyError::TrivialInput("K"));
    }
    let fp = product::based_fiber_product(h, k)?;
    let meet = fp.based_core();
    let rank_meet = meet.rank() as usize;
    let join = product::join(h, k)?;
    let pushout = product::topological_pushout(h, k, std::slice::from_ref(&meet))?;
    let chi_t = pushout.graph.euler_characteristic();
    let folds = pushout.folded_core().is_based_isomorphic(join.graph());
    let double_coset_ranks = product::double_cosets(h, k)?.ranks();
    let structure = if rank_meet >= 1 { check_structure(h, k)? } else { None };
    let mut report = InstanceReport {
        input: PairSpec { h: h.to_spec(), k: k.to_spec() },
        h: h.rank(),
        k: k.rank(),
        rank_meet,
        rank_join: join.rank(),
        chi_t,
        chi_join: join.graph().euler_characteristic(),
        pushout_folds_to_join: folds,
        double_coset_ranks,
        structure,
        verdicts: Verdicts {
            hanna_neumann: Verdict::not_applicable(),
            burns: Verdict::not_applicable(),
            burns_sum: Verdict::not_applicable(),
            strong_burns: Verdict::not_applicable(),
            large_join: Verdict::not_applicable(),
            rank_two: Verdict::not_applicable(),
            pushout: Verdict::not_applicable(),
            structure: Verdict::not_applicable(),
        },
    };
    report.verdicts = Verdicts::evaluate(&report);
    Ok(report)
}
