//! Estimators and fitting helpers: compensated summation, nearest-rank
//! quantiles, trimmed means, seeded bootstrap intervals, Kolmogorov-Smirnov
//! distance, and log-log power-law fits.

use crate::error::Error;
use crate::rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Neumaier-compensated sum; keeps long series accurate to a few ulps.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Summary statistic selector for sweeps.
///
/// Sample means of learning times and overlap sums do not exist for
/// `beta <= 0`, so sweep validation refuses `Mean` there; quantile-based
/// choices are always safe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Mean,
    Median,
    Quantile(f64),
    TrimmedMean(f64),
}

impl Statistic {
    /// Evaluate on an already sorted slice.
    pub fn eval_sorted(&self, sorted: &[f64]) -> f64 {
        match *self {
            Statistic::Mean => mean(sorted),
            Statistic::Median => nearest_rank(sorted, 0.5),
            Statistic::Quantile(q) => nearest_rank(sorted, q),
            Statistic::TrimmedMean(frac) => trimmed_mean_sorted(sorted, frac),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        match *self {
            Statistic::Quantile(q) if !(0.0 < q && q < 1.0) => Err(Error::InvalidSweepSpec(
                format!("quantile level must be in (0,1), got {q}"),
            )),
            Statistic::TrimmedMean(f) if !(0.0..0.5).contains(&f) => Err(Error::InvalidSweepSpec(
                format!("trim fraction must be in [0, 0.5), got {f}"),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Statistic::Mean => write!(f, "mean"),
            Statistic::Median => write!(f, "median"),
            Statistic::Quantile(q) => write!(f, "q:{q}"),
            Statistic::TrimmedMean(t) => write!(f, "trim:{t}"),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let stat = match s {
            "mean" => Statistic::Mean,
            "median" => Statistic::Median,
            _ => {
                if let Some(q) = s.strip_prefix("q:") {
                    Statistic::Quantile(q.parse().map_err(|_| {
                        Error::InvalidSweepSpec(format!("bad quantile level in {s:?}"))
                    })?)
                } else if let Some(t) = s.strip_prefix("trim:") {
                    Statistic::TrimmedMean(t.parse().map_err(|_| {
                        Error::InvalidSweepSpec(format!("bad trim fraction in {s:?}"))
                    })?)
                } else {
                    return Err(Error::InvalidSweepSpec(format!(
                        "unknown statistic {s:?} (expected mean, median, q:<level>, trim:<frac>)"
                    )));
                }
            }
        };
        stat.validate()?;
        Ok(stat)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    let mut acc = NeumaierSum::new();
    for &x in xs {
        acc.add(x);
    }
    acc.value() / xs.len() as f64
}

pub fn standard_error(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let var =
        xs.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / (xs.len().saturating_sub(1)) as f64;
    (var / xs.len() as f64).sqrt()
}

/// Lower nearest-rank quantile of a sorted slice: the element of rank
/// `ceil(q * n)` (1-indexed), clamped to the ends.
pub fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Same rule for integer samples.
pub fn nearest_rank_u64(sorted: &[u64], q: f64) -> u64 {
    assert!(!sorted.is_empty());
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

fn trimmed_mean_sorted(sorted: &[f64], frac: f64) -> f64 {
    let cut = (frac * sorted.len() as f64).floor() as usize;
    let kept = &sorted[cut..sorted.len() - cut];
    mean(kept)
}

pub fn sort_f64(xs: &mut [f64]) {
    xs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("NaN in samples"));
}

/// Two-sided Kolmogorov-Smirnov distance between the empirical law of `xs`
/// (sorted in place) and the reference CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(xs: &mut [f64], cdf: F) -> f64 {
    sort_f64(xs);
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    d
}

/// Percentile bootstrap confidence interval (2.5% and 97.5% of `resamples`
/// replicates). Resampling is a pure function of `(seed, replicate index)`.
pub fn bootstrap_ci(
    samples: &[f64],
    statistic: Statistic,
    resamples: u32,
    seed: u64,
) -> (f64, f64) {
    assert!(!samples.is_empty());
    let n = samples.len();
    let mut stats = Vec::with_capacity(resamples as usize);
    let mut buf = vec![0.0f64; n];
    for b in 0..resamples {
        let mut g = rng::stream(seed, b as u64);
        for slot in buf.iter_mut() {
            *slot = samples[g.below(n as u64) as usize];
        }
        sort_f64(&mut buf);
        stats.push(statistic.eval_sorted(&buf));
    }
    sort_f64(&mut stats);
    (nearest_rank(&stats, 0.025), nearest_rank(&stats, 0.975))
}

/// Least-squares power-law fit in log-log coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Fit `value ~ exp(intercept) * n^exponent` by ordinary least squares on
/// `(ln n, ln value)`.
pub fn fit_power_exponent(points: &[(f64, f64)]) -> Result<PowerFit, Error> {
    if points.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    for &(n, v) in points {
        if !(n > 0.0) || !(v > 0.0) || !n.is_finite() || !v.is_finite() {
            return Err(Error::DegenerateFit(format!(
                "all points must be positive and finite, got ({n}, {v})"
            )));
        }
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let xbar = mean(&xs);
    let ybar = mean(&ys);
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all n equal".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(PowerFit {
        exponent: slope,
        intercept,
        r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_compensates() {
        let mut s = NeumaierSum::new();
        for x in [1e200, 0.1, 0.2, 0.3, -1e200] {
            s.add(x);
        }
        assert!((s.value() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn nearest_rank_examples() {
        let xs: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        assert_eq!(nearest_rank(&xs, 0.9), 9.0);
        assert_eq!(nearest_rank(&xs, 0.5), 5.0);
        assert_eq!(nearest_rank(&xs, 1e-9), 1.0);
        assert_eq!(nearest_rank_u64(&[7, 7, 7], 0.5), 7);
    }

    #[test]
    fn fit_recovers_synthetic_power_law() {
        let pts: Vec<(f64, f64)> = (4..=10)
            .map(|e| {
                let n = (1u64 << e) as f64;
                (n, 3.0 * n.sqrt())
            })
            .collect();
        let fit = fit_power_exponent(&pts).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-12, "{}", fit.exponent);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn fit_on_n_log_n_slightly_inflates_slope() {
        let pts: Vec<(f64, f64)> = (8..=14)
            .map(|e| {
                let n = (1u64 << e) as f64;
                (n, n * n.ln())
            })
            .collect();
        let fit = fit_power_exponent(&pts).unwrap();
        assert!(
            fit.exponent > 1.0 && fit.exponent < 1.2,
            "slope {}",
            fit.exponent
        );
    }

    #[test]
    fn fit_constant_is_flat() {
        let pts: Vec<(f64, f64)> = (4..=8).map(|e| ((1u64 << e) as f64, 2.5)).collect();
        let fit = fit_power_exponent(&pts).unwrap();
        assert!(fit.exponent.abs() < 1e-14);
        assert_eq!(fit.r2, 1.0);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit_power_exponent(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        let zero = [(1.0, 1.0), (2.0, 0.0), (4.0, 2.0), (8.0, 3.0)];
        assert!(fit_power_exponent(&zero).is_err());
        let flat_n = [(2.0, 1.0), (2.0, 2.0), (2.0, 3.0), (2.0, 4.0)];
        assert!(fit_power_exponent(&flat_n).is_err());
    }

    #[test]
    fn ks_on_exact_uniform_grid_is_small() {
        let mut xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_distance(&mut xs, |x| x.clamp(0.0, 1.0));
        assert!(d <= 0.0005 + 1e-12, "{d}");
    }

    #[test]
    fn bootstrap_is_deterministic_and_brackets_median() {
        let xs: Vec<f64> = (0..500).map(|i| (i % 97) as f64).collect();
        let a = bootstrap_ci(&xs, Statistic::Median, 200, 5);
        let b = bootstrap_ci(&xs, Statistic::Median, 200, 5);
        assert_eq!(a, b);
        let mut sorted = xs.clone();
        sort_f64(&mut sorted);
        let med = nearest_rank(&sorted, 0.5);
        assert!(a.0 <= med && med <= a.1);
    }

    #[test]
    fn statistic_parsing() {
        assert_eq!("median".parse::<Statistic>().unwrap(), Statistic::Median);
        assert_eq!(
            "q:0.9".parse::<Statistic>().unwrap(),
            Statistic::Quantile(0.9)
        );
        assert_eq!(
            "trim:0.1".parse::<Statistic>().unwrap(),
            Statistic::TrimmedMean(0.1)
        );
        assert!("q:1.5".parse::<Statistic>().is_err());
        assert!("mode".parse::<Statistic>().is_err());
    }
}
