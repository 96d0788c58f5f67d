//! Stochastic simulation of the three learners with reproducible
//! counter-based randomness.
//!
//! Run `r` of an ensemble draws everything from `rng::stream(seed, r)`, so
//! the sample vector is a pure function of the inputs and the run index:
//! executions agree byte-for-byte whatever the thread count or scheduling.
//!
//! Modeling choices for the guessing learners (their step semantics are not
//! pinned down by the batch analysis): the hypothesis pool includes the
//! target itself ([`INCLUDE_TARGET_IN_POOL`]), the initial pick is uniform,
//! and the word that falsifies a hypothesis is counted before the re-draw.
//! Picking the target on the first draw therefore consumes zero words.

use crate::error::Error;
use crate::overlap::{OverlapDistribution, OverlapVector};
use crate::rng::{self, SplitMix64};
use crate::stats;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// The student may guess the (still unproven) target concept at any re-draw.
/// A pool of wrong concepts only would change constants, not scaling.
pub const INCLUDE_TARGET_IN_POOL: bool = true;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Batch,
    Memoryless,
    FullMemory,
}

impl Algorithm {
    pub fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Batch => "batch",
            Algorithm::Memoryless => "memoryless",
            Algorithm::FullMemory => "full-memory",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "batch" => Ok(Algorithm::Batch),
            "memoryless" => Ok(Algorithm::Memoryless),
            "full-memory" | "full_memory" => Ok(Algorithm::FullMemory),
            _ => Err(Error::InvalidSweepSpec(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Quenched,
    Annealed,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Quenched => "quenched",
            Mode::Annealed => "annealed",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "quenched" => Ok(Mode::Quenched),
            "annealed" => Ok(Mode::Annealed),
            _ => Err(Error::InvalidSweepSpec(format!("unknown mode {s:?}"))),
        }
    }
}

/// What generated a sample set: a fixed vector (quenched) or a law that was
/// re-drawn every run (annealed).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Quenched { overlaps: OverlapVector },
    Annealed { dist: OverlapDistribution },
}

/// Learning-time samples with full provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSampleSet {
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub n: usize,
    pub seed: u64,
    pub source: SampleSource,
    pub samples: Vec<u64>,
}

/// Overlaps with their logs precomputed: quenched ensembles reuse one
/// vector across every run, and the guessing learners revisit concepts, so
/// caching `ln p_i` removes most transcendental calls from the hot loops.
struct Prepared<'a> {
    p: &'a [f64],
    ln_p: Vec<f64>,
}

impl<'a> Prepared<'a> {
    fn new(p: &'a OverlapVector) -> Self {
        Self {
            p: p.values(),
            ln_p: p.values().iter().map(|&x| x.ln()).collect(),
        }
    }

    /// Words needed to falsify hypothesis `i`, which survives each word
    /// with probability `p_i`: a geometric variable sampled by inversion,
    /// `ceil(ln u / ln p_i)`. (`p_i = 0` gives ratio 0, mapped to 1 word.)
    #[inline]
    fn geometric_words(&self, i: usize, rng: &mut SplitMix64) -> u64 {
        let u = rng.next_f64_positive();
        let k = (u.ln() / self.ln_p[i]).ceil();
        if k >= 1.0 {
            k as u64
        } else {
            1
        }
    }

    fn batch(&self, rng: &mut SplitMix64) -> u64 {
        (0..self.p.len())
            .map(|i| self.geometric_words(i, rng))
            .max()
            .unwrap_or(0)
    }

    fn memoryless(&self, rng: &mut SplitMix64) -> u64 {
        let n = self.p.len() as u64;
        let mut words: u64 = 0;
        loop {
            let pick = rng.below(n + 1);
            if pick == 0 {
                return words;
            }
            words = words.saturating_add(self.geometric_words((pick - 1) as usize, rng));
        }
    }

    fn full_memory(&self, rng: &mut SplitMix64) -> u64 {
        let mut alive: Vec<usize> = (0..self.p.len()).collect();
        let mut words: u64 = 0;
        loop {
            let pick = rng.below(alive.len() as u64 + 1);
            if pick == 0 {
                return words;
            }
            let slot = (pick - 1) as usize;
            words = words.saturating_add(self.geometric_words(alive[slot], rng));
            alive.swap_remove(slot);
        }
    }

    fn run(&self, algorithm: Algorithm, rng: &mut SplitMix64) -> u64 {
        match algorithm {
            Algorithm::Batch => self.batch(rng),
            Algorithm::Memoryless => self.memoryless(rng),
            Algorithm::FullMemory => self.full_memory(rng),
        }
    }
}

/// Batch learner: wrong concept `i` dies at an independent geometric time,
/// and the concept is learned when the last one dies. Distributionally
/// identical to intersecting word lists under the independence hypothesis,
/// in O(n) per run.
pub fn simulate_batch_with(p: &OverlapVector, rng: &mut SplitMix64) -> u64 {
    Prepared::new(p).batch(rng)
}

pub fn simulate_batch(p: &OverlapVector, seed: u64) -> u64 {
    simulate_batch_with(p, &mut rng::stream(seed, 0))
}

/// Memoryless learner: keep a uniformly drawn hypothesis until a word
/// falsifies it, then re-draw with replacement. Absorbs at the target.
pub fn simulate_memoryless_with(p: &OverlapVector, rng: &mut SplitMix64) -> u64 {
    Prepared::new(p).memoryless(rng)
}

pub fn simulate_memoryless(p: &OverlapVector, seed: u64) -> u64 {
    simulate_memoryless_with(p, &mut rng::stream(seed, 0))
}

/// Full-memory learner: as memoryless, but re-draws are uniform over the
/// not-yet-rejected concepts only.
pub fn simulate_full_memory_with(p: &OverlapVector, rng: &mut SplitMix64) -> u64 {
    Prepared::new(p).full_memory(rng)
}

pub fn simulate_full_memory(p: &OverlapVector, seed: u64) -> u64 {
    simulate_full_memory_with(p, &mut rng::stream(seed, 0))
}

/// Run an ensemble.
///
/// Annealed mode draws a fresh overlap vector per run from the run's own
/// stream; quenched mode reuses `fixed_p` (or one vector sampled from the
/// distribution's reserved stream) across runs.
pub fn run_ensemble(
    algorithm: Algorithm,
    mode: Mode,
    dist: &OverlapDistribution,
    n: usize,
    runs: u64,
    seed: u64,
    fixed_p: Option<&OverlapVector>,
) -> Result<TimeSampleSet, Error> {
    if runs == 0 {
        return Err(Error::EmptySamples);
    }
    match mode {
        Mode::Quenched => {
            let p = match fixed_p {
                Some(v) => v.clone(),
                None => dist.sample(n, seed),
            };
            let prep = Prepared::new(&p);
            let samples: Vec<u64> = (0..runs)
                .into_par_iter()
                .map(|r| prep.run(algorithm, &mut rng::stream(seed, r)))
                .collect();
            Ok(TimeSampleSet {
                algorithm,
                mode,
                n: p.len(),
                seed,
                source: SampleSource::Quenched { overlaps: p },
                samples,
            })
        }
        Mode::Annealed => {
            let samples: Vec<u64> = (0..runs)
                .into_par_iter()
                .map(|r| {
                    let mut g = rng::stream(seed, r);
                    let p = dist.sample_with(n, &mut g);
                    Prepared::new(&p).run(algorithm, &mut g)
                })
                .collect();
            Ok(TimeSampleSet {
                algorithm,
                mode,
                n,
                seed,
                source: SampleSource::Annealed { dist: *dist },
                samples,
            })
        }
    }
}

/// Empirical `N_Delta`: the lower nearest-rank `(1 - delta)`-quantile of the
/// sampled word counts.
pub fn empirical_n_delta(samples: &TimeSampleSet, delta: f64) -> Result<u64, Error> {
    if samples.samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            domain: "(0, 1)",
        });
    }
    let mut sorted = samples.samples.clone();
    sorted.sort_unstable();
    Ok(stats::nearest_rank_u64(&sorted, 1.0 - delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::stats::{mean, standard_error};

    fn vector(vs: &[f64]) -> OverlapVector {
        OverlapVector::new(vs.to_vec()).unwrap()
    }

    fn any_dist() -> OverlapDistribution {
        OverlapDistribution::power(0.0).unwrap()
    }

    fn quenched_samples(alg: Algorithm, p: &OverlapVector, runs: u64, seed: u64) -> Vec<f64> {
        run_ensemble(alg, Mode::Quenched, &any_dist(), p.len(), runs, seed, Some(p))
            .unwrap()
            .samples
            .into_iter()
            .map(|w| w as f64)
            .collect()
    }

    #[test]
    fn batch_mean_matches_geometric() {
        let s = quenched_samples(Algorithm::Batch, &vector(&[0.5]), 1_000_000, 1);
        assert!((mean(&s) - 2.0).abs() < 0.01, "{}", mean(&s));
        let s = quenched_samples(Algorithm::Batch, &vector(&[0.5, 0.5]), 1_000_000, 2);
        assert!((mean(&s) - 8.0 / 3.0).abs() < 0.01, "{}", mean(&s));
        assert_eq!(simulate_batch(&vector(&[0.0, 0.0]), 9), 1);
        assert_eq!(simulate_batch(&vector(&[]), 9), 0);
    }

    #[test]
    fn memoryless_means() {
        let s = quenched_samples(Algorithm::Memoryless, &vector(&[0.5]), 1_000_000, 3);
        assert!((mean(&s) - 2.0).abs() < 0.01, "{}", mean(&s));
        let s = quenched_samples(Algorithm::Memoryless, &vector(&[0.0]), 1_000_000, 4);
        assert!((mean(&s) - 1.0).abs() < 0.005, "{}", mean(&s));
        assert_eq!(simulate_memoryless(&vector(&[]), 5), 0);
    }

    #[test]
    fn full_memory_means() {
        let s = quenched_samples(Algorithm::FullMemory, &vector(&[0.5]), 1_000_000, 5);
        assert!((mean(&s) - 1.0).abs() < 0.005, "{}", mean(&s));
        // Two dead-on-arrival concepts: averaging over the 3! pick orders
        // gives exactly one word in expectation.
        let s = quenched_samples(Algorithm::FullMemory, &vector(&[0.0, 0.0]), 1_000_000, 6);
        assert!((mean(&s) - 1.0).abs() < 0.005, "{}", mean(&s));
        assert_eq!(simulate_full_memory(&vector(&[]), 7), 0);
    }

    #[test]
    fn ensembles_are_deterministic() {
        let d = OverlapDistribution::power(1.0).unwrap();
        let a = run_ensemble(Algorithm::Batch, Mode::Annealed, &d, 16, 5000, 42, None).unwrap();
        let b = run_ensemble(Algorithm::Batch, Mode::Annealed, &d, 16, 5000, 42, None).unwrap();
        assert_eq!(a, b);
        let c = run_ensemble(Algorithm::Batch, Mode::Annealed, &d, 16, 5000, 43, None).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn annealed_batch_mean_matches_annealed_time() {
        let d = OverlapDistribution::power(1.0).unwrap();
        let set = run_ensemble(Algorithm::Batch, Mode::Annealed, &d, 1, 1_000_000, 8, None).unwrap();
        let s: Vec<f64> = set.samples.iter().map(|&w| w as f64).collect();
        assert!((mean(&s) - 2.0).abs() < 0.02, "{}", mean(&s));
    }

    #[test]
    fn quenched_batch_matches_exact_engine() {
        let p = vector(&[0.5, 1.0 / 3.0]);
        let set =
            run_ensemble(Algorithm::Batch, Mode::Quenched, &any_dist(), 2, 1_000_000, 9, Some(&p))
                .unwrap();
        let s: Vec<f64> = set.samples.iter().map(|&w| w as f64).collect();
        assert!((mean(&s) - 2.3).abs() < 0.01, "{}", mean(&s));
    }

    #[test]
    fn full_memory_dominates_memoryless() {
        let d = OverlapDistribution::power(1.0).unwrap();
        let p = d.sample(30, 77);
        let ml = quenched_samples(Algorithm::Memoryless, &p, 100_000, 10);
        let fm = quenched_samples(Algorithm::FullMemory, &p, 100_000, 11);
        let gap = mean(&ml) - mean(&fm);
        let se = (standard_error(&ml).powi(2) + standard_error(&fm).powi(2)).sqrt();
        assert!(gap > -3.0 * se, "gap {gap}, se {se}");
    }

    #[test]
    fn empirical_n_delta_examples() {
        let set = TimeSampleSet {
            algorithm: Algorithm::Batch,
            mode: Mode::Quenched,
            n: 1,
            seed: 0,
            source: SampleSource::Quenched {
                overlaps: vector(&[0.5]),
            },
            samples: (1..=10).collect(),
        };
        assert_eq!(empirical_n_delta(&set, 0.1).unwrap(), 9);
        let sevens = TimeSampleSet {
            samples: vec![7; 5],
            ..set.clone()
        };
        assert_eq!(empirical_n_delta(&sevens, 0.5).unwrap(), 7);
        assert!(empirical_n_delta(&set, 0.0).is_err());
    }

    #[test]
    fn empirical_n_delta_matches_exact() {
        let p = vector(&[0.5]);
        let set =
            run_ensemble(Algorithm::Batch, Mode::Quenched, &any_dist(), 1, 1_000_000, 12, Some(&p))
                .unwrap();
        let emp = empirical_n_delta(&set, 0.1).unwrap();
        let exact = exact::n_delta(&p, 0.1).unwrap();
        assert_eq!(emp, exact);
    }

    #[test]
    fn batch_cdf_matches_learned_probability() {
        let p = vector(&[0.7, 0.4, 0.9]);
        let runs = 100_000u64;
        let set =
            run_ensemble(Algorithm::Batch, Mode::Quenched, &any_dist(), 3, runs, 13, Some(&p))
                .unwrap();
        let kmax = *set.samples.iter().max().unwrap();
        let mut counts = vec![0u64; (kmax + 1) as usize];
        for &w in &set.samples {
            counts[w as usize] += 1;
        }
        let mut cum = 0u64;
        let mut worst: f64 = 0.0;
        for (k, &c) in counts.iter().enumerate() {
            cum += c;
            let emp = cum as f64 / runs as f64;
            let model = exact::learned_probability(&p, k as u64);
            worst = worst.max((emp - model).abs());
        }
        assert!(worst <= 0.01, "sup gap {worst}");
    }
}
