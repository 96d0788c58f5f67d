//! Exact quenched batch-learning quantities for a fixed overlap vector.
//!
//! After `k` teacher words, wrong concept `i` survives with probability
//! `p_i^k` independently, so the learning probability is
//! `l_k = prod_i (1 - p_i^k)` and the expected number of words is the series
//! `T = sum_{k>=0} (1 - l_k)`.
//!
//! The series here starts at `k = 0`, i.e. it counts the first word too:
//! with a single overlap of 1/2 the expected word count is 2 (a geometric
//! law), which also matches the `1/(1-p_i)` envelope bounds and the
//! simulators. `convention_offset` records the `+1` relative to a series
//! started at `k = 1`.

use crate::error::Error;
use crate::overlap::OverlapVector;
use crate::stats::NeumaierSum;
use serde::{Deserialize, Serialize};

/// Default cap on the number of series terms before the truncation rule
/// fires; `expected_time_with_cap` accepts a custom cap.
pub const DEFAULT_TERM_CAP: u64 = 1_000_000_000;

/// Truncated-series value of the expected learning time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactTimeResult {
    /// Expected number of words consumed, including the first.
    pub expected_time: f64,
    /// Index at which the series was cut.
    pub truncation_k: u64,
    /// Certified bound on the omitted tail.
    pub tail_bound: f64,
    /// `+1` relative to a series started at `k = 1`; zero only for `n = 0`.
    pub convention_offset: f64,
}

/// `l_k`: probability that the concept is learned within `k` words.
///
/// Evaluated as `exp(sum_i ln(1 - p_i^k))` with `p_i^k = exp(k ln p_i)`, so
/// products of hundreds of near-one factors keep full precision. `l_0 = 0`
/// for nonempty vectors (no word seen, nothing excluded).
pub fn learned_probability(p: &OverlapVector, k: u64) -> f64 {
    if p.is_empty() {
        return 1.0;
    }
    if k == 0 {
        return 0.0;
    }
    log_learned(p.values(), k as f64).exp()
}

#[inline]
fn pow_k(p: f64, k: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else if k == 1.0 {
        p
    } else {
        (k * p.ln()).exp()
    }
}

#[inline]
fn log_learned(ps: &[f64], k: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    for &p in ps {
        acc.add((-pow_k(p, k)).ln_1p());
    }
    acc.value()
}

/// `1 - l_k` without cancellation when `l_k` is close to one.
#[inline]
fn not_learned(ps: &[f64], k: f64) -> f64 {
    -log_learned(ps, k).exp_m1()
}

/// Envelope bounds on the not-learned probability after `k` words:
/// `max_i p_i^k <= 1 - l_k <= min(1, sum_i p_i^k)`.
pub fn not_learned_bounds(p: &OverlapVector, k: u64) -> (f64, f64) {
    if p.is_empty() {
        return (0.0, 0.0);
    }
    if k == 0 {
        return (1.0, 1.0);
    }
    let kf = k as f64;
    let mut hi = NeumaierSum::new();
    let mut lo = 0.0f64;
    for &pi in p.values() {
        let t = pow_k(pi, kf);
        lo = lo.max(t);
        hi.add(t);
    }
    (lo, hi.value().min(1.0))
}

/// Expected number of words to learn, truncating the series once the
/// geometric envelope `n p_max^k / (1 - p_max)` certifies a tail below
/// `tol`.
pub fn expected_time(p: &OverlapVector, tol: f64) -> Result<ExactTimeResult, Error> {
    expected_time_with_cap(p, tol, DEFAULT_TERM_CAP)
}

pub fn expected_time_with_cap(
    p: &OverlapVector,
    tol: f64,
    cap: u64,
) -> Result<ExactTimeResult, Error> {
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            domain: "(0, inf)",
        });
    }
    if p.is_empty() {
        return Ok(ExactTimeResult {
            expected_time: 0.0,
            truncation_k: 0,
            tail_bound: 0.0,
            convention_offset: 0.0,
        });
    }
    let n = p.len() as f64;
    let pmax = p.max_overlap().unwrap();
    // Smallest k with n * pmax^k < tol * (1 - pmax).
    let cut = if pmax == 0.0 {
        1
    } else {
        let k = ((tol * (1.0 - pmax) / n).ln() / pmax.ln()).ceil();
        if !k.is_finite() || k > cap as f64 {
            return Err(Error::ToleranceUnreachable {
                needed: if k.is_finite() { k as u64 } else { u64::MAX },
                cap,
            });
        }
        (k as u64).max(1)
    };
    let mut acc = NeumaierSum::new();
    acc.add(1.0); // k = 0: nothing can be excluded before the first word
    for k in 1..cut {
        acc.add(not_learned(p.values(), k as f64));
    }
    let tail_bound = if pmax == 0.0 {
        0.0
    } else {
        n * pow_k(pmax, cut as f64) / (1.0 - pmax)
    };
    Ok(ExactTimeResult {
        expected_time: acc.value(),
        truncation_k: cut,
        tail_bound,
        convention_offset: 1.0,
    })
}

const SUBSET_MAX: usize = 20;

/// Inclusion-exclusion form of the expected time:
/// `T = 1 + sum over nonempty subsets s of (-1)^(|s|-1) p_s / (1 - p_s)`
/// with `p_s` the product of the subset's overlaps. Enumerates all `2^n`
/// subsets, so it is capped at `n <= 20`; it serves as an independent oracle
/// for the series engine.
pub fn inclusion_exclusion_time(p: &OverlapVector) -> Result<f64, Error> {
    let n = p.len();
    if n > SUBSET_MAX {
        return Err(Error::SizeLimit {
            op: "inclusion_exclusion_time",
            n,
            max: SUBSET_MAX,
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let ps = p.values();
    let mut prod = vec![1.0f64; 1usize << n];
    let mut acc = NeumaierSum::new();
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let ps_mask = prod[mask & (mask - 1)] * ps[low];
        prod[mask] = ps_mask;
        let term = ps_mask / (1.0 - ps_mask);
        if mask.count_ones() % 2 == 1 {
            acc.add(term);
        } else {
            acc.add(-term);
        }
    }
    Ok(1.0 + acc.value())
}

/// Smallest `k` with `1 - l_k <= delta`: the exact batch-learning `N_Delta`.
/// Exponential search then bisection; `1 - l_k` is nonincreasing in `k`.
pub fn n_delta(p: &OverlapVector, delta: f64) -> Result<u64, Error> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain {
            name: "delta",
            value: delta,
            domain: "(0, 1)",
        });
    }
    if p.is_empty() {
        return Ok(0);
    }
    let ps = p.values();
    let q = |k: u64| not_learned(ps, k as f64);
    let mut hi = 1u64;
    while q(hi) > delta {
        hi *= 2;
    }
    let mut lo = hi / 2; // q(lo) > delta (or lo = 0, where q = 1)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if q(mid) <= delta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The envelope of Eq.-level bounds on the expected time:
/// `max_i 1/(1-p_i) <= T <= sum_i 1/(1-p_i)`.
pub fn sum_bounds(p: &OverlapVector) -> (f64, f64) {
    if p.is_empty() {
        return (0.0, 0.0);
    }
    let mut hi = NeumaierSum::new();
    let mut lo = 0.0f64;
    for &pi in p.values() {
        let t = 1.0 / (1.0 - pi);
        lo = lo.max(t);
        hi.add(t);
    }
    (lo, hi.value())
}

/// `S = sum_i 1/(1 - p_i)`, the statistic whose stable-law scaling the
/// sweeps check.
pub fn harmonic_overlap_sum(p: &OverlapVector) -> f64 {
    sum_bounds(p).1
}
