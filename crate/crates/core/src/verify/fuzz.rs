use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_instance, InstanceReport, PairSpec, Status};
use crate::subgroup::Subgroup;
use crate::word::{Alphabet, Letter, Word};

/// Parameters of a campaign over rank-2 pairs. Instance `i` draws from a
/// ChaCha stream keyed by `(seed, i)`, so a config fixes the whole stream
/// independently of evaluation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub seed: u64,
    pub count: usize,
    pub min_gens: usize,
    pub max_gens: usize,
    pub max_len: usize,
    /// Resample each subgroup until its rank is exactly this.
    #[serde(default)]
    pub exact_rank: Option<usize>,
    /// Random words added to the generators of both subgroups, forcing a
    /// nontrivial intersection.
    #[serde(default)]
    pub shared: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { seed: 42, count: 1000, min_gens: 1, max_gens: 3, max_len: 6, exact_rank: None, shared: 0 }
    }
}

/// A uniformly random reduced word of the given length.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, len: usize) -> Word {
    let r = alphabet.rank();
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let g = rng.gen_range(0..r);
        let letter = if rng.gen_bool(0.5) { Letter::inverse_of(g) } else { Letter::generator(g) };
        if letters.last().is_some_and(|&l| l.inverse() == letter) {
            continue;
        }
        letters.push(letter);
    }
    Word::reduce(alphabet, letters).expect("letters are in the alphabet")
}

/// `gen_count` reduced words, each of length uniform in `1..=max_len`.
/// Nontrivial because every generator is.
pub fn random_subgroup<R: Rng + ?Sized>(rng: &mut R, alphabet: Alphabet, gen_count: usize, max_len: usize) -> Subgroup {
    assert!(gen_count >= 1 && max_len >= 1, "need at least one generator of positive length");
    let words = (0..gen_count)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            random_word(rng, alphabet, len)
        })
        .collect();
    Subgroup::from_generators(alphabet, words).expect("generators share the alphabet")
}

fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// The pair for instance `index` of a campaign.
pub fn random_pair(config: &FuzzConfig, index: usize) -> (Subgroup, Subgroup) {
    let ab = Alphabet::rank_two();
    let mut rng = instance_rng(config.seed, index);
    let shared: Vec<Word> = (0..config.shared)
        .map(|_| {
            let len = rng.gen_range(1..=config.max_len);
            random_word(&mut rng, ab, len)
        })
        .collect();
    let side = |rng: &mut ChaCha8Rng| loop {
        let count = rng.gen_range(config.min_gens..=config.max_gens);
        let mut words: Vec<Word> = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=config.max_len);
                random_word(rng, ab, len)
            })
            .collect();
        words.extend(shared.iter().cloned());
        let s = Subgroup::from_generators(ab, words).expect("rank-2 words");
        if config.exact_rank.is_none_or(|r| s.rank() == r) {
            return s;
        }
    };
    let h = side(&mut rng);
    let k = side(&mut rng);
    (h, k)
}

fn run_instance(config: &FuzzConfig, index: usize) -> Result<InstanceReport, String> {
    let (h, k) = random_pair(config, index);
    check_instance(&h, &k).map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub config: FuzzConfig,
    pub instances: Vec<InstanceReport>,
    /// Instances whose check raised an error, by index.
    pub errors: Vec<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CampaignSummary {
    pub count: usize,
    pub failed: Vec<usize>,
    pub errors: usize,
    /// `[pass, fail, not applicable]` per verdict.
    pub status_counts: BTreeMap<&'static str, [usize; 3]>,
    pub min_slack: BTreeMap<&'static str, i64>,
}

impl CampaignReport {
    fn collect(config: &FuzzConfig, results: Vec<Result<InstanceReport, String>>) -> Self {
        let mut instances = Vec::with_capacity(results.len());
        let mut errors = Vec::new();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(report) => instances.push(report),
                Err(e) => errors.push((i, e)),
            }
        }
        CampaignReport { config: config.clone(), instances, errors }
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.instances.iter().all(|r| !r.failed())
    }

    /// One instance report per line, in instance order.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.instances {
            out.push_str(&serde_json::to_string(r).expect("reports serialize"));
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> CampaignSummary {
        let mut status_counts: BTreeMap<&'static str, [usize; 3]> = BTreeMap::new();
        let mut min_slack: BTreeMap<&'static str, i64> = BTreeMap::new();
        let mut failed = Vec::new();
        for (i, r) in self.instances.iter().enumerate() {
            if r.failed() {
                failed.push(i);
            }
            for (name, v) in r.verdicts.named() {
                let slot = match v.status {
                    Status::Pass => 0,
                    Status::Fail => 1,
                    Status::NotApplicable => 2,
                };
                status_counts.entry(name).or_default()[slot] += 1;
                if let Some(s) = v.slack {
                    let m = min_slack.entry(name).or_insert(s);
                    *m = (*m).min(s);
                }
            }
        }
        CampaignSummary { count: self.instances.len(), failed, errors: self.errors.len(), status_counts, min_slack }
    }

    /// Inputs of the failing instances.
    pub fn failure_fixtures(&self) -> Vec<(usize, PairSpec)> {
        self.instances.iter().enumerate().filter(|(_, r)| r.failed()).map(|(i, r)| (i, r.input.clone())).collect()
    }

    /// Writes `instance-<i>-h.json` and `instance-<i>-k.json` for every
    /// failing instance, each a standalone subgroup spec.
    pub fn write_fixtures(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        let fixtures = self.failure_fixtures();
        if fixtures.is_empty() {
            return Ok(Vec::new());
        }
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (i, pair) in fixtures {
            for (side, spec) in [("h", &pair.h), ("k", &pair.k)] {
                let path = dir.join(format!("instance-{i}-{side}.json"));
                std::fs::write(&path, serde_json::to_string_pretty(spec)?)?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

pub fn fuzz_sequential(config: &FuzzConfig) -> CampaignReport {
    let results = (0..config.count).map(|i| run_instance(config, i)).collect();
    CampaignReport::collect(config, results)
}

/// Runs the campaign, across threads when the `parallel` feature is on.
/// The report is identical to [`fuzz_sequential`]'s.
pub fn fuzz(config: &FuzzConfig) -> CampaignReport {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let results = (0..config.count).into_par_iter().map(|i| run_instance(config, i)).collect();
        CampaignReport::collect(config, results)
    }
    #[cfg(not(feature = "parallel"))]
    fuzz_sequential(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_subgroup() {
        let ab = Alphabet::rank_two();
        let a = random_subgroup(&mut instance_rng(7, 3), ab, 3, 5);
        let b = random_subgroup(&mut instance_rng(7, 3), ab, 3, 5);
        assert_eq!(a.generators(), b.generators());
        assert!(a.rank() <= 3);
    }

    #[test]
    fn single_letter_subgroups() {
        let ab = Alphabet::rank_two();
        let cyclic: Vec<Subgroup> = ["a", "b", "A", "B"].iter().map(|g| Subgroup::parse(ab, &[g]).unwrap()).collect();
        for seed in 0..20 {
            let s = random_subgroup(&mut instance_rng(seed, 0), ab, 1, 1);
            assert_eq!(s.rank(), 1);
            assert!(cyclic.contains(&s));
        }
    }

    #[test]
    fn random_words_are_reduced_with_exact_length() {
        let ab = Alphabet::rank_two();
        let mut rng = instance_rng(1, 1);
        for len in 0..30 {
            assert_eq!(random_word(&mut rng, ab, len).len(), len);
        }
    }

    #[test]
    fn exact_rank_and_shared_words() {
        let config = FuzzConfig { min_gens: 2, max_gens: 2, exact_rank: Some(2), ..FuzzConfig::default() };
        for i in 0..20 {
            let (h, k) = random_pair(&config, i);
            assert_eq!((h.rank(), k.rank()), (2, 2));
        }
        let config = FuzzConfig { shared: 1, ..FuzzConfig::default() };
        for i in 0..20 {
            let (h, k) = random_pair(&config, i);
            assert!(!crate::product::intersection(&h, &k).unwrap().is_trivial());
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let config = FuzzConfig { count: 40, ..FuzzConfig::default() };
        let a = fuzz(&config);
        let b = fuzz_sequential(&config);
        assert_eq!(a.to_json_lines(), b.to_json_lines());
        assert!(a.passed(), "{:?}", a.summary());
    }
}
