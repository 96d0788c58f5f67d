//! Parameter sweeps over the number of wrong concepts, with heavy-tail-safe
//! statistics, bootstrap intervals, exponent fits, and named pass/fail
//! checks. Each report carries the command line that reproduces it.

use crate::error::Error;
use crate::exact;
use crate::overlap::{OverlapDistribution, OverlapVector};
use crate::rng;
use crate::simulate::{self, Algorithm, Mode};
use crate::special::gamma;
use crate::stats::{self, PowerFit, Statistic};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

const BOOTSTRAP_RESAMPLES: u32 = 1000;

// Stream-domain tags so distinct pipelines sharing a seed stay independent.
const TAG_TIME_SWEEP: u64 = 0x01;
const TAG_EXPMIN: u64 = 0x02;
const TAG_WEIBULL: u64 = 0x03;
const TAG_STABLE: u64 = 0x04;
const TAG_BATCHTHM: u64 = 0x05;
const TAG_MAINPREV: u64 = 0x06;
const TAG_COMPARE: u64 = 0x07;
const TAG_BOOTSTRAP: u64 = 0x08;

/// One named pass/fail entry: the measured value, a human-readable
/// threshold, and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: String,
    pub pass: bool,
}

impl Check {
    fn band(name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.to_string(),
            measured,
            threshold: format!("in [{lo}, {hi}]"),
            pass: measured >= lo && measured <= hi,
        }
    }

    fn at_most(name: &str, measured: f64, cap: f64) -> Self {
        Check {
            name: name.to_string(),
            measured,
            threshold: format!("<= {cap}"),
            pass: measured <= cap,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: measured = {}, threshold {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.threshold
        )
    }
}

/// One grid row: `n`, the statistic's canonical label, its value, and a
/// bootstrap confidence interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: u64,
    pub statistic: String,
    pub value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

/// Sweep output: rows, an optional log-log fit, named checks, and the
/// reproduction command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub rows: Vec<SweepRow>,
    pub fit: Option<PowerFit>,
    pub checks: Vec<Check>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// CSV of the rows alone: `n,statistic,value,ci_lo,ci_hi`.
    pub fn rows_csv(&self) -> String {
        let mut out = String::from("n,statistic,value,ci_lo,ci_hi\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{}", r.n, r.statistic, r.value, r.ci_lo, r.ci_hi)
                .expect("write to string");
        }
        out
    }
}

/// Specification of a generic learning-time sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub beta: f64,
    pub support_max: f64,
    pub n_grid: Vec<u64>,
    pub runs_per_n: u64,
    pub delta: f64,
    pub seed: u64,
    pub statistic: Statistic,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n_grid.len() < 4 {
            return Err(Error::InvalidSweepSpec(format!(
                "n_grid needs at least 4 points for exponent fits, got {}",
                self.n_grid.len()
            )));
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSweepSpec(
                "n_grid must be strictly increasing".into(),
            ));
        }
        if self.runs_per_n < 100 {
            return Err(Error::InvalidSweepSpec(format!(
                "runs_per_n must be at least 100, got {}",
                self.runs_per_n
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidSweepSpec(format!(
                "delta must be in (0,1), got {}",
                self.delta
            )));
        }
        self.statistic.validate()?;
        // Sample means of learning times do not exist for beta <= 0 in
        // annealed mode; refuse them outright.
        if self.statistic == Statistic::Mean && self.mode == Mode::Annealed && self.beta <= 0.0 {
            return Err(Error::InvalidSweepSpec(format!(
                "mean statistic is invalid for annealed beta = {} (no expectation); \
                 use median or a quantile",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn canonical_command(&self) -> String {
        format!(
            "batchlab sweep --alg {} --mode {} --beta {} --support-max {} --n-grid {} \
             --runs {} --delta {} --seed {} --stat {}",
            self.algorithm.as_str(),
            self.mode.as_str(),
            self.beta,
            self.support_max,
            grid_string(&self.n_grid),
            self.runs_per_n,
            self.delta,
            self.seed,
            self.statistic
        )
    }
}

pub fn grid_string(grid: &[u64]) -> String {
    grid.iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn ci_of(samples: &[f64], stat: Statistic, seed: u64) -> (f64, f64) {
    stats::bootstrap_ci(
        samples,
        stat,
        BOOTSTRAP_RESAMPLES,
        rng::subseed(seed, TAG_BOOTSTRAP),
    )
}

/// Generic sweep: per grid point, run an ensemble and summarize the word
/// counts with the requested statistic.
pub fn run_time_sweep(spec: &SweepSpec) -> Result<SweepReport, Error> {
    spec.validate()?;
    let dist = OverlapDistribution::new(spec.beta, spec.support_max)?;
    let base = rng::subseed(spec.seed, TAG_TIME_SWEEP);
    let mut rows = Vec::with_capacity(spec.n_grid.len());
    for &n in &spec.n_grid {
        let cell = rng::subseed(base, n);
        let set = simulate::run_ensemble(
            spec.algorithm,
            spec.mode,
            &dist,
            n as usize,
            spec.runs_per_n,
            cell,
            None,
        )?;
        let mut samples: Vec<f64> = set.samples.iter().map(|&w| w as f64).collect();
        stats::sort_f64(&mut samples);
        let value = spec.statistic.eval_sorted(&samples);
        let (ci_lo, ci_hi) = ci_of(&samples, spec.statistic, cell);
        rows.push(SweepRow {
            n,
            statistic: spec.statistic.to_string(),
            value,
            ci_lo,
            ci_hi,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.value)).collect();
    let fit = stats::fit_power_exponent(&points).ok();
    Ok(SweepReport {
        command: spec.canonical_command(),
        rows,
        fit,
        checks: Vec::new(),
    })
}

/// Scaled mean of the minimum complement overlap:
/// `n^(1/(1+beta)) E[min_i q_i] -> Gamma(1 + 1/(1+beta))`.
pub fn min_overlap_sweep(
    dist: &OverlapDistribution,
    n_grid: &[u64],
    runs: u64,
    seed: u64,
) -> Result<SweepReport, Error> {
    require_full_support(dist, "min_overlap_sweep")?;
    if n_grid.is_empty() || runs == 0 {
        return Err(Error::InvalidSweepSpec("empty grid or zero runs".into()));
    }
    let beta = dist.beta();
    let base = rng::subseed(seed, TAG_EXPMIN);
    let mut rows = Vec::new();
    let mut raw_means = Vec::new();
    for &n in n_grid {
        let cell = rng::subseed(base, n);
        let scale = (n as f64).powf(1.0 / (1.0 + beta));
        let mins: Vec<f64> = (0..runs)
            .into_par_iter()
            .map(|r| {
                let mut g = rng::stream(cell, r);
                (0..n).map(|_| dist.draw_q(&mut g)).fold(f64::INFINITY, f64::min)
            })
            .collect();
        let scaled: Vec<f64> = mins.iter().map(|&m| m * scale).collect();
        let value = stats::mean(&scaled);
        let (ci_lo, ci_hi) = ci_of(&scaled, Statistic::Mean, cell);
        raw_means.push((n as f64, stats::mean(&mins)));
        rows.push(SweepRow {
            n,
            statistic: "mean_min_q_scaled".into(),
            value,
            ci_lo,
            ci_hi,
        });
    }
    let limit = gamma(1.0 + 1.0 / (1.0 + beta));
    let last = rows.last().expect("nonempty grid");
    let checks = vec![Check::at_most(
        "expmin_constant_rel_gap",
        (last.value - limit).abs() / limit,
        crate::thresholds::EXPMIN_REL_TOL,
    )];
    let fit = stats::fit_power_exponent(&raw_means).ok();
    Ok(SweepReport {
        command: format!(
            "batchlab verify --suite expmin --seed {seed} (beta {beta}, grid {})",
            grid_string(n_grid)
        ),
        rows,
        fit,
        checks,
    })
}

/// KS distance between the law of `n^(1/(1+beta)) min_i q_i` and its
/// Weibull limit `G(x) = 1 - exp(-x^(1+beta))`.
pub fn weibull_limit_check(
    dist: &OverlapDistribution,
    n: u64,
    runs: u64,
    seed: u64,
) -> Result<f64, Error> {
    require_full_support(dist, "weibull_limit_check")?;
    if runs < 10_000 {
        return Err(Error::InvalidSweepSpec(format!(
            "weibull_limit_check needs at least 1e4 ensembles, got {runs}"
        )));
    }
    let beta = dist.beta();
    let scale = (n as f64).powf(1.0 / (1.0 + beta));
    let cell = rng::subseed(seed, TAG_WEIBULL);
    let mut scaled: Vec<f64> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut g = rng::stream(cell, r);
            let min = (0..n).map(|_| dist.draw_q(&mut g)).fold(f64::INFINITY, f64::min);
            min * scale
        })
        .collect();
    Ok(stats::ks_distance(&mut scaled, |x| {
        -((-x.powf(1.0 + beta)).exp_m1())
    }))
}

/// Quantile behavior of `S = sum_i 1/(1 - p_i)` across the grid, checked in
/// the regime the overlap exponent selects: law-of-large-numbers band for
/// `beta > 0`, the `n ln n` band for `beta = 0`, tightness of the scaled
/// quartiles for `beta < 0`.
pub fn stable_sum_sweep(
    dist: &OverlapDistribution,
    n_grid: &[u64],
    runs: u64,
    seed: u64,
) -> Result<SweepReport, Error> {
    require_full_support(dist, "stable_sum_sweep")?;
    if n_grid.is_empty() || runs < 100 {
        return Err(Error::InvalidSweepSpec(
            "stable_sum_sweep needs a grid and at least 100 runs".into(),
        ));
    }
    let beta = dist.beta();
    let base = rng::subseed(seed, TAG_STABLE);
    let label = if beta > 0.0 {
        "median_s_over_n"
    } else if beta == 0.0 {
        "median_s_over_n_ln_n"
    } else {
        "median_s_scaled"
    };
    let mut rows = Vec::new();
    let mut iqrs = Vec::new();
    for &n in n_grid {
        let cell = rng::subseed(base, n);
        let scale = if beta > 0.0 {
            n as f64
        } else if beta == 0.0 {
            n as f64 * (n as f64).ln()
        } else {
            (n as f64).powf(1.0 / (1.0 + beta))
        };
        let mut scaled: Vec<f64> = (0..runs)
            .into_par_iter()
            .map(|r| {
                let mut g = rng::stream(cell, r);
                let mut sum = stats::NeumaierSum::new();
                for _ in 0..n {
                    sum.add(1.0 / dist.draw_q(&mut g));
                }
                sum.value() / scale
            })
            .collect();
        stats::sort_f64(&mut scaled);
        let value = stats::nearest_rank(&scaled, 0.5);
        let (ci_lo, ci_hi) = ci_of(&scaled, Statistic::Median, cell);
        iqrs.push(stats::nearest_rank(&scaled, 0.75) - stats::nearest_rank(&scaled, 0.25));
        rows.push(SweepRow {
            n,
            statistic: label.into(),
            value,
            ci_lo,
            ci_hi,
        });
    }
    let mut checks = Vec::new();
    if beta > 0.0 {
        let center = (beta + 1.0) / beta;
        let worst = rows
            .iter()
            .map(|r| (r.value - center).abs() / center)
            .fold(0.0, f64::max);
        checks.push(Check::at_most(
            "allstab_lln_rel_gap",
            worst,
            crate::thresholds::ALLSTAB_LLN_REL_BAND,
        ));
    } else if beta == 0.0 {
        let (lo, hi) = crate::thresholds::ALLSTAB_LOG_BAND;
        let qualifying: Vec<&SweepRow> = rows
            .iter()
            .filter(|r| r.n >= crate::thresholds::ALLSTAB_LOG_MIN_N)
            .collect();
        if qualifying.is_empty() {
            checks.push(Check {
                name: "allstab_log_band".into(),
                measured: f64::NAN,
                threshold: format!("grid must reach n >= {}", crate::thresholds::ALLSTAB_LOG_MIN_N),
                pass: false,
            });
        } else {
            for r in qualifying {
                checks.push(Check::band(
                    &format!("allstab_log_band_n{}", r.n),
                    r.value,
                    lo,
                    hi,
                ));
            }
        }
    } else {
        let max = iqrs.iter().copied().fold(f64::MIN, f64::max);
        let min = iqrs.iter().copied().fold(f64::MAX, f64::min);
        checks.push(Check::at_most(
            "allstab_iqr_stability",
            max / min,
            crate::thresholds::ALLSTAB_IQR_FACTOR,
        ));
    }
    Ok(SweepReport {
        command: format!(
            "batchlab verify --suite allstab --seed {seed} (beta {beta}, grid {})",
            grid_string(n_grid)
        ),
        rows,
        fit: None,
        checks,
    })
}

/// Median exact batch `N_Delta` over the overlap ensemble, fitted against
/// `n` and checked against the regime's exponent band.
pub fn verify_batchthm(
    beta: f64,
    delta: f64,
    n_grid: &[u64],
    vectors_per_n: u64,
    seed: u64,
) -> Result<SweepReport, Error> {
    let dist = OverlapDistribution::power(beta)?;
    if n_grid.len() < 4 {
        return Err(Error::InvalidSweepSpec(
            "batchthm needs at least 4 grid points".into(),
        ));
    }
    let base = rng::subseed(seed, TAG_BATCHTHM);
    let mut rows = Vec::new();
    for &n in n_grid {
        let cell = rng::subseed(base, n);
        let mut nds: Vec<f64> = (0..vectors_per_n)
            .into_par_iter()
            .map(|v| {
                let mut g = rng::stream(cell, v);
                let p = dist.sample_with(n as usize, &mut g);
                exact::n_delta(&p, delta).expect("delta validated") as f64
            })
            .collect();
        stats::sort_f64(&mut nds);
        let value = stats::nearest_rank(&nds, 0.5);
        let (ci_lo, ci_hi) = ci_of(&nds, Statistic::Median, cell);
        rows.push(SweepRow {
            n,
            statistic: "median_n_delta".into(),
            value,
            ci_lo,
            ci_hi,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.value)).collect();
    let fit = stats::fit_power_exponent(&points)?;
    let mut checks = Vec::new();
    if beta == 0.0 {
        let tol = crate::thresholds::BATCHTHM_EXP_TOL_UNIFORM;
        checks.push(Check::band(
            "batchthm_exponent_beta0",
            fit.exponent,
            1.0 - tol,
            1.0 + tol,
        ));
        let ratios: Vec<f64> = rows.iter().map(|r| r.value / r.n as f64).collect();
        let spread = ratios.iter().copied().fold(f64::MIN, f64::max)
            / ratios.iter().copied().fold(f64::MAX, f64::min);
        checks.push(Check::at_most(
            "batchthm_linear_band",
            spread,
            crate::thresholds::BATCHTHM_LINEAR_RATIO_MAX,
        ));
    } else {
        let target = 1.0 / (1.0 + beta);
        let tol = if beta > 0.0 {
            crate::thresholds::BATCHTHM_EXP_TOL_POSITIVE
        } else {
            crate::thresholds::BATCHTHM_EXP_TOL_NEGATIVE
        };
        checks.push(Check::band(
            &format!("batchthm_exponent_beta{beta}"),
            fit.exponent,
            target - tol,
            target + tol,
        ));
    }
    Ok(SweepReport {
        command: format!(
            "batchlab verify --suite batchthm --seed {seed} (beta {beta}, delta {delta}, \
             grid {}, vectors {vectors_per_n})",
            grid_string(n_grid)
        ),
        rows,
        fit: Some(fit),
        checks,
    })
}

/// Empirical `N_Delta` of a simulated guessing learner in annealed mode,
/// with the regime's band or exponent check.
pub fn verify_mainprev(
    algorithm: Algorithm,
    beta: f64,
    delta: f64,
    n_grid: &[u64],
    runs_per_n: u64,
    seed: u64,
) -> Result<SweepReport, Error> {
    if algorithm == Algorithm::Batch {
        return Err(Error::InvalidSweepSpec(
            "mainprev covers the memoryless and full-memory learners".into(),
        ));
    }
    let dist = OverlapDistribution::power(beta)?;
    if n_grid.len() < 4 {
        return Err(Error::InvalidSweepSpec(
            "mainprev needs at least 4 grid points".into(),
        ));
    }
    let base = rng::subseed(seed, TAG_MAINPREV);
    let mut rows = Vec::new();
    for &n in n_grid {
        let cell = rng::subseed(base, n);
        let set = simulate::run_ensemble(
            algorithm,
            Mode::Annealed,
            &dist,
            n as usize,
            runs_per_n,
            cell,
            None,
        )?;
        let value = simulate::empirical_n_delta(&set, delta)? as f64;
        let samples: Vec<f64> = set.samples.iter().map(|&w| w as f64).collect();
        let (ci_lo, ci_hi) = ci_of(&samples, Statistic::Quantile(1.0 - delta), cell);
        rows.push(SweepRow {
            n,
            statistic: format!("n_delta_{}", algorithm.as_str()),
            value,
            ci_lo,
            ci_hi,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.value)).collect();
    let fit = stats::fit_power_exponent(&points)?;
    let mut checks = Vec::new();
    if beta == 0.0 {
        let scaled: Vec<f64> = rows
            .iter()
            .map(|r| r.value / (r.n as f64 * (r.n as f64).ln()))
            .collect();
        let spread = scaled.iter().copied().fold(f64::MIN, f64::max)
            / scaled.iter().copied().fold(f64::MAX, f64::min);
        checks.push(Check::at_most(
            &format!("mainprev_nlogn_band_{}", algorithm.as_str()),
            spread,
            crate::thresholds::MAINPREV_NLOGN_FACTOR,
        ));
    } else {
        let (target, tol) = if beta > 0.0 {
            (1.0, crate::thresholds::MAINPREV_EXP_TOL_POSITIVE)
        } else {
            (
                1.0 / (1.0 + beta),
                crate::thresholds::MAINPREV_EXP_TOL_NEGATIVE,
            )
        };
        checks.push(Check::band(
            &format!("mainprev_exponent_{}", algorithm.as_str()),
            fit.exponent,
            target - tol,
            target + tol,
        ));
    }
    Ok(SweepReport {
        command: format!(
            "batchlab verify --suite mainprev --seed {seed} ({} beta {beta}, delta {delta}, \
             grid {}, runs {runs_per_n})",
            algorithm.as_str(),
            grid_string(n_grid)
        ),
        rows,
        fit: Some(fit),
        checks,
    })
}

/// Side-by-side median `N_Delta` of the three learners on shared overlap
/// ensembles: exact for batch, simulated for the other two.
///
/// The ensembles are coupled twice over: the same vectors feed all three
/// algorithms, and each grid point reads a prefix of one per-member draw of
/// the largest size. Prefixes of i.i.d. draws keep every marginal law
/// exact, while cross-n and cross-algorithm ratios lose the shared
/// ensemble noise.
pub fn compare_algorithms(
    beta: f64,
    delta: f64,
    n_grid: &[u64],
    vectors_per_n: u64,
    runs_per_vector: u64,
    seed: u64,
) -> Result<SweepReport, Error> {
    let dist = OverlapDistribution::power(beta)?;
    if n_grid.is_empty() || vectors_per_n == 0 || runs_per_vector == 0 {
        return Err(Error::InvalidSweepSpec(
            "compare needs a grid, vectors, and runs".into(),
        ));
    }
    if !n_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidSweepSpec(
            "n_grid must be strictly increasing".into(),
        ));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidSweepSpec(format!(
            "delta must be in (0,1), got {delta}"
        )));
    }
    let n_max = *n_grid.last().expect("nonempty grid") as usize;
    let base = rng::subseed(seed, TAG_COMPARE);
    // per_member[v][grid index] = [batch, memoryless, full-memory]
    let per_member: Vec<Vec<[f64; 3]>> = (0..vectors_per_n)
        .into_par_iter()
        .map(|v| {
            let mut g = rng::stream(base, v);
            let full = dist.sample_with(n_max, &mut g);
            let member = rng::subseed(base, v + 1);
            n_grid
                .iter()
                .enumerate()
                .map(|(gi, &n)| {
                    let p = OverlapVector::new(full.values()[..n as usize].to_vec())
                        .expect("prefix of a valid vector");
                    let batch = exact::n_delta(&p, delta).expect("delta validated") as f64;
                    let mut out = [batch, 0.0, 0.0];
                    for (slot, alg) in [(1, Algorithm::Memoryless), (2, Algorithm::FullMemory)] {
                        let sim_seed = rng::subseed(member, gi as u64 * 4 + slot as u64);
                        let set = simulate::run_ensemble(
                            alg,
                            Mode::Quenched,
                            &dist,
                            n as usize,
                            runs_per_vector,
                            sim_seed,
                            Some(&p),
                        )
                        .expect("runs validated");
                        out[slot] = simulate::empirical_n_delta(&set, delta)
                            .expect("delta validated")
                            as f64;
                    }
                    out
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    let mut medians: Vec<(u64, [f64; 3])> = Vec::new();
    for (gi, &n) in n_grid.iter().enumerate() {
        let cell = rng::subseed(base, n);
        let mut meds = [0.0f64; 3];
        for (slot, label) in [(0, "batch"), (1, "memoryless"), (2, "full_memory")] {
            let mut vals: Vec<f64> = per_member.iter().map(|r| r[gi][slot]).collect();
            stats::sort_f64(&mut vals);
            let value = stats::nearest_rank(&vals, 0.5);
            let (ci_lo, ci_hi) = ci_of(&vals, Statistic::Median, rng::subseed(cell, slot as u64));
            meds[slot] = value;
            rows.push(SweepRow {
                n,
                statistic: format!("median_n_delta_{label}"),
                value,
                ci_lo,
                ci_hi,
            });
        }
        medians.push((n, meds));
    }
    let mut checks = Vec::new();
    if beta > 0.0 {
        let qualifying: Vec<&(u64, [f64; 3])> = medians
            .iter()
            .filter(|(n, _)| *n >= crate::thresholds::COMPARE_STRICT_MIN_N)
            .collect();
        let worst = qualifying
            .iter()
            .map(|(_, m)| m[0] / m[1].min(m[2]))
            .fold(0.0, f64::max);
        checks.push(Check {
            name: "compare_batch_strictly_fastest".into(),
            measured: worst,
            threshold: format!(
                "< 1 at every n >= {}",
                crate::thresholds::COMPARE_STRICT_MIN_N
            ),
            pass: !qualifying.is_empty() && worst < 1.0,
        });
    }
    if beta == 0.0 {
        let ratios: Vec<f64> = medians.iter().map(|(_, m)| m[0] / m[2]).collect();
        let worst_step = ratios
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max);
        checks.push(Check {
            name: "compare_batch_over_full_memory_decreasing".into(),
            measured: worst_step,
            threshold: "every adjacent ratio step < 1".into(),
            pass: ratios.len() >= 2 && worst_step < 1.0,
        });
    }
    Ok(SweepReport {
        command: format!(
            "batchlab compare --beta {beta} --delta {delta} --n-grid {} --vectors {vectors_per_n} \
             --runs {runs_per_vector} --seed {seed}",
            grid_string(n_grid)
        ),
        rows,
        fit: None,
        checks,
    })
}

fn require_full_support(dist: &OverlapDistribution, op: &'static str) -> Result<(), Error> {
    if dist.has_full_support() {
        Ok(())
    } else {
        Err(Error::Unsupported {
            op,
            why: format!("support_max = {} < 1", dist.support_max()),
        })
    }
}

pub use crate::suite::{Suite, SuiteReport};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation_rules() {
        let mut spec = SweepSpec {
            algorithm: Algorithm::Batch,
            mode: Mode::Annealed,
            beta: 0.0,
            support_max: 1.0,
            n_grid: vec![16, 32, 64, 128],
            runs_per_n: 200,
            delta: 0.1,
            seed: 1,
            statistic: Statistic::Median,
        };
        assert!(spec.validate().is_ok());
        spec.statistic = Statistic::Mean;
        assert!(spec.validate().is_err(), "annealed mean at beta = 0");
        spec.mode = Mode::Quenched;
        assert!(spec.validate().is_ok(), "quenched means always exist");
        spec.mode = Mode::Annealed;
        spec.beta = 1.0;
        assert!(spec.validate().is_ok(), "annealed mean fine for beta > 0");
        spec.n_grid = vec![16, 16, 64, 128];
        assert!(spec.validate().is_err());
        spec.n_grid = vec![16, 32, 64];
        assert!(spec.validate().is_err());
        spec.n_grid = vec![16, 32, 64, 128];
        spec.runs_per_n = 10;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn time_sweep_is_reproducible_and_fits() {
        let spec = SweepSpec {
            algorithm: Algorithm::Batch,
            mode: Mode::Annealed,
            beta: 1.0,
            support_max: 1.0,
            n_grid: vec![16, 32, 64, 128],
            runs_per_n: 500,
            delta: 0.1,
            seed: 7,
            statistic: Statistic::Median,
        };
        let a = run_time_sweep(&spec).unwrap();
        let b = run_time_sweep(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 4);
        assert!(a.fit.is_some());
        assert!(a.command.contains("--stat median"));
        let csv = a.rows_csv();
        assert!(csv.starts_with("n,statistic,value,ci_lo,ci_hi\n"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn expmin_small_scale_converges() {
        let d = OverlapDistribution::power(0.0).unwrap();
        let rep = min_overlap_sweep(&d, &[125, 250, 500, 1000], 20_000, 3).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
        // Exact finite-n value is n/(n+1); the measured point sits near it.
        let last = rep.rows.last().unwrap();
        assert!((last.value - 1000.0 / 1001.0).abs() < 0.02, "{}", last.value);
    }

    #[test]
    fn stable_sweep_regimes() {
        let d = OverlapDistribution::power(1.0).unwrap();
        let rep = stable_sum_sweep(&d, &[1 << 10, 1 << 11, 1 << 12], 400, 5).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
        for r in &rep.rows {
            assert!((r.value - 2.0).abs() < 0.2, "median S/n = {}", r.value);
        }

        let d = OverlapDistribution::power(-0.5).unwrap();
        let rep = stable_sum_sweep(&d, &[1 << 8, 1 << 10, 1 << 12], 400, 6).unwrap();
        assert!(rep.passed(), "{:?}", rep.checks);
    }

    #[test]
    fn batchthm_small_scale_exponent() {
        let rep = verify_batchthm(1.0, 0.1, &[64, 128, 256, 512], 150, 11).unwrap();
        let fit = rep.fit.unwrap();
        assert!(
            (fit.exponent - 0.5).abs() < 0.15,
            "exponent {}",
            fit.exponent
        );
    }

    #[test]
    fn mainprev_rejects_batch() {
        assert!(verify_mainprev(Algorithm::Batch, 0.0, 0.1, &[16, 32, 64, 128], 200, 1).is_err());
    }

    #[test]
    fn compare_emits_three_statistics_per_n() {
        let rep = compare_algorithms(1.0, 0.1, &[64, 128], 60, 60, 2).unwrap();
        assert_eq!(rep.rows.len(), 6);
        assert!(rep.command.starts_with("batchlab compare"));
    }
}
