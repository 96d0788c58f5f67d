//! The moment zeta function `zeta_F(s) = sum_{k>=1} m_k^s` of the overlap
//! law and the annealed (distribution-averaged) expected batch-learning
//! time built from it.
//!
//! Series are truncated with certified brackets: the moments of the power
//! family satisfy
//! `Gamma(beta+2) (k+beta+2)^-(beta+1) <= m_k <= Gamma(beta+2) k^-(beta+1)`
//! for every `k >= 1` (log-convexity of Gamma), so integral comparison gives
//! two-sided tail bounds and the returned value carries the midpoint with
//! half-width as `tail_bound`.

use crate::error::Error;
use crate::overlap::OverlapDistribution;
use crate::rng;
use crate::special::{gamma, ln_gamma};
use crate::stats::NeumaierSum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const TERM_CAP: u64 = 1 << 33;

/// Truncated moment-zeta value with a certified error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaEvaluation {
    pub value: f64,
    pub terms_summed: u64,
    pub tail_bound: f64,
}

/// Annealed expected time as a function of the number of wrong concepts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealedTimeCurve {
    pub beta: f64,
    pub convention_offset: f64,
    pub entries: Vec<(u64, f64)>,
}

#[inline]
fn pow_s(m: f64, s: f64) -> f64 {
    if s.fract() == 0.0 && s.abs() <= 512.0 {
        m.powi(s as i32)
    } else {
        m.powf(s)
    }
}

/// Closed-form moment of the full-support family.
#[inline]
fn moment_full(beta: f64, k: f64) -> f64 {
    (ln_gamma(beta + 2.0) + ln_gamma(k + 1.0) - ln_gamma(k + beta + 2.0)).exp()
}

/// `zeta_F(s)` summed until the two-sided tail bracket is below `tol`.
pub fn zeta(dist: &OverlapDistribution, s: f64, tol: f64) -> Result<ZetaEvaluation, Error> {
    let beta = dist.beta();
    let threshold = 1.0 / (1.0 + beta);
    if s <= threshold {
        return Err(Error::ZetaDiverges { s, threshold });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            domain: "(0, inf)",
        });
    }
    if dist.has_full_support() {
        zeta_full(beta, s, tol)
    } else {
        zeta_truncated(dist, s, tol)
    }
}

fn zeta_full(beta: f64, s: f64, tol: f64) -> Result<ZetaEvaluation, Error> {
    let g = gamma(beta + 2.0);
    let gs = pow_s(g, s);
    let ge = s * (beta + 1.0); // tail decay exponent, > 1 on the domain
    let int_hi = |k: f64| gs * k.powf(1.0 - ge) / (ge - 1.0);
    let int_lo = |k: f64| gs * (k + beta + 3.0).powf(1.0 - ge) / (ge - 1.0);
    let bracket = |k: f64| {
        let m_next = moment_full(beta, k + 1.0);
        let t = pow_s(m_next, s);
        let lo = int_lo(k).max(t);
        let hi = int_hi(k).min(t + int_hi(k + 1.0));
        (lo, hi.max(lo))
    };

    let mut terms: u64 = 16;
    loop {
        let (lo, hi) = bracket(terms as f64);
        if (hi - lo) / 2.0 <= tol {
            break;
        }
        terms *= 2;
        if terms > TERM_CAP {
            return Err(Error::ToleranceUnreachable {
                needed: terms,
                cap: TERM_CAP,
            });
        }
    }

    let mut acc = NeumaierSum::new();
    let mut m = 1.0 / (beta + 2.0); // m_1
    for k in 1..=terms {
        acc.add(pow_s(m, s));
        m *= (k as f64 + 1.0) / (k as f64 + beta + 2.0);
    }
    let (lo, hi) = bracket(terms as f64);
    Ok(ZetaEvaluation {
        value: acc.value() + 0.5 * (lo + hi),
        terms_summed: terms,
        tail_bound: 0.5 * (hi - lo),
    })
}

fn zeta_truncated(dist: &OverlapDistribution, s: f64, tol: f64) -> Result<ZetaEvaluation, Error> {
    // With q <= a < 1 only the one-sided bound
    // m_k <= c Gamma(beta+1) k^-(beta+1) is available; quadrature per term.
    let beta = dist.beta();
    let cg = dist.normalization() * gamma(beta + 1.0);
    let ge = s * (beta + 1.0);
    let tail_hi = |k: f64| pow_s(cg, s) * k.powf(1.0 - ge) / (ge - 1.0);

    let mut terms: u64 = 16;
    while tail_hi(terms as f64) > tol {
        terms *= 2;
        if terms > 1 << 20 {
            return Err(Error::ToleranceUnreachable {
                needed: terms,
                cap: 1 << 20,
            });
        }
    }
    let mut acc = NeumaierSum::new();
    for k in 1..=terms {
        acc.add(pow_s(dist.moment(k), s));
    }
    Ok(ZetaEvaluation {
        value: acc.value(),
        terms_summed: terms,
        tail_bound: tail_hi(terms as f64),
    })
}

/// Monte Carlo estimate of `E[1/(1 - x_1 ... x_n)]` over i.i.d. overlaps.
///
/// The geometric expansion of the integrand shows the limit is
/// `1 + zeta_F(n)`: the `k = 0` term of the expansion is the `+1` that the
/// zeta series (which starts at `k = 1`) does not carry.
pub fn zeta_lemma_check(
    dist: &OverlapDistribution,
    n: u32,
    runs: u64,
    seed: u64,
) -> Result<f64, Error> {
    let threshold = 1.0 / (1.0 + dist.beta());
    if (n as f64) <= threshold {
        return Err(Error::ZetaDiverges {
            s: n as f64,
            threshold,
        });
    }
    if runs == 0 {
        return Err(Error::EmptySamples);
    }
    let samples: Vec<f64> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut g = rng::stream(seed, r);
            let mut x = 1.0f64;
            for _ in 0..n {
                x *= 1.0 - dist.draw_q(&mut g);
            }
            1.0 / (1.0 - x)
        })
        .collect();
    let mut acc = NeumaierSum::new();
    for v in samples {
        acc.add(v);
    }
    Ok(acc.value() / runs as f64)
}

struct AnnealedTail {
    beta: f64,
    n: f64,
    g: f64,
}

impl AnnealedTail {
    fn s_hi(&self, i: i32, j: f64) -> f64 {
        let ge = i as f64 * (self.beta + 1.0);
        self.g.powi(i) * j.powf(1.0 - ge) / (ge - 1.0)
    }

    fn s_lo(&self, i: i32, j: f64) -> f64 {
        let ge = i as f64 * (self.beta + 1.0);
        self.g.powi(i) * (j + self.beta + 3.0).powf(1.0 - ge) / (ge - 1.0)
    }

    /// Exact linear tail: `sum_{j>J} m_j = (beta+1) B(beta, J+2)`.
    fn s1_exact(&self, j: f64) -> f64 {
        ((self.beta + 1.0).ln() + ln_gamma(self.beta) + ln_gamma(j + 2.0)
            - ln_gamma(j + self.beta + 2.0))
            .exp()
    }

    /// Bracket of `sum_{j>J} [1 - (1 - m_j)^n]` from the Bonferroni
    /// truncations of the binomial expansion; valid once `n m_{J+1} <= 1`.
    fn bracket(&self, j: f64) -> (f64, f64) {
        let c2 = self.n * (self.n - 1.0) / 2.0;
        let c3 = c2 * (self.n - 2.0) / 3.0;
        let lin = self.n * self.s1_exact(j);
        let lo = lin - c2 * self.s_hi(2, j);
        let hi = lin - c2 * self.s_lo(2, j) + c3 * self.s_hi(3, j);
        (lo, hi)
    }
}

/// Annealed expected learning time `1 + sum_j [1 - (1 - m_j)^n]`.
///
/// Finite only for `beta > 0` (the series inherits the divergence of
/// `sum m_j` otherwise). Terms up to `J` are summed directly in log space;
/// beyond `J` the exact Beta-function value of the linear part plus a
/// Bonferroni bracket of the rest certify the truncation to `tol`.
pub fn annealed_time(dist: &OverlapDistribution, n: u64, tol: f64) -> Result<f64, Error> {
    let beta = dist.beta();
    if beta <= 0.0 {
        return Err(Error::AnnealedDiverges { beta });
    }
    require_full_support(dist, "annealed_time")?;
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            domain: "[1, inf)",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let nf = n as f64;
    let tail = AnnealedTail {
        beta,
        n: nf,
        g: gamma(beta + 2.0),
    };
    let mut cut: u64 = 16;
    loop {
        let jf = cut as f64;
        let (lo, hi) = tail.bracket(jf);
        if nf * moment_full(beta, jf + 1.0) <= 1.0 && (hi - lo) / 2.0 <= tol {
            break;
        }
        cut *= 2;
        if cut > TERM_CAP {
            return Err(Error::ToleranceUnreachable {
                needed: cut,
                cap: TERM_CAP,
            });
        }
    }
    let mut acc = NeumaierSum::new();
    let mut m = 1.0 / (beta + 2.0);
    for j in 1..=cut {
        acc.add(-(nf * (-m).ln_1p()).exp_m1());
        m *= (j as f64 + 1.0) / (j as f64 + beta + 2.0);
    }
    let (lo, hi) = tail.bracket(cut as f64);
    Ok(1.0 + acc.value() + 0.5 * (lo + hi))
}

pub fn annealed_time_curve(
    dist: &OverlapDistribution,
    n_grid: &[u64],
    tol: f64,
) -> Result<AnnealedTimeCurve, Error> {
    let entries = n_grid
        .iter()
        .map(|&n| annealed_time(dist, n, tol).map(|v| (n, v)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AnnealedTimeCurve {
        beta: dist.beta(),
        convention_offset: 1.0,
        entries,
    })
}

const ALTERNATING_MAX_N: usize = 40;
const ALTERNATING_ABS_TOL: f64 = 1e-8;

/// The alternating-binomial form of the annealed time,
/// `1 - sum_{k=1}^n C(n,k) (-1)^k zeta_F(k)`.
///
/// Binomial weights reach ~1e11 at `n = 40`, so each zeta value is computed
/// to an absolute tolerance scaled by its weight and the outer sum is
/// Neumaier-compensated. Kept as an `n <= 40` cross-check of the direct
/// series; the direct form is the production path.
pub fn annealed_time_alternating(dist: &OverlapDistribution, n: u64) -> Result<f64, Error> {
    let beta = dist.beta();
    if beta <= 0.0 {
        return Err(Error::AnnealedDiverges { beta });
    }
    require_full_support(dist, "annealed_time_alternating")?;
    if n == 0 {
        return Err(Error::Domain {
            name: "n",
            value: 0.0,
            domain: "[1, 40]",
        });
    }
    if n as usize > ALTERNATING_MAX_N {
        return Err(Error::SizeLimit {
            op: "annealed_time_alternating",
            n: n as usize,
            max: ALTERNATING_MAX_N,
        });
    }
    let mut acc = NeumaierSum::new();
    let mut binom: u128 = 1;
    for k in 1..=n {
        binom = binom * (n - k + 1) as u128 / k as u128;
        let weight = binom as f64;
        let tol_k = ALTERNATING_ABS_TOL / (weight * n as f64);
        let z = zeta(dist, k as f64, tol_k)?;
        let signed = if k % 2 == 1 { weight } else { -weight };
        acc.add(signed * z.value);
    }
    Ok(1.0 + acc.value())
}

/// Limit constant of the sublinear regime:
/// `(c Gamma(beta+1))^(1/(beta+1)) * Gamma(beta/(beta+1))`, the limit of
/// `n^(-1/(1+beta)) * annealed_time(n)` for `beta > 0`.
pub fn t1_constant(beta: f64, c: f64) -> Result<f64, Error> {
    if !(beta > 0.0) {
        return Err(Error::Domain {
            name: "beta",
            value: beta,
            domain: "(0, inf)",
        });
    }
    if !(c > 0.0) {
        return Err(Error::Domain {
            name: "c",
            value: c,
            domain: "(0, inf)",
        });
    }
    Ok(((c.ln() + ln_gamma(beta + 1.0)) / (beta + 1.0) + ln_gamma(beta / (beta + 1.0))).exp())
}

/// Correction term of the `beta = 0` (uniform-family) expansion:
/// `T_2(n) = -sum_j [(1 - m_j)^n - 1 + n m_j]`, with `m_j = 1/(j+1)`.
///
/// `-T_2(n) ~ n ln n`; the tail past `J >= 2n` is certified by the
/// Bonferroni bracket `C(n,2) m^2 - C(n,3) m^3 <= (1-m)^n - 1 + nm <=
/// C(n,2) m^2 - C(n,3) m^3 + C(n,4) m^4` summed with integral comparison.
pub fn t2_remainder(dist: &OverlapDistribution, n: u64, tol: f64) -> Result<f64, Error> {
    if dist.beta() != 0.0 {
        return Err(Error::Unsupported {
            op: "t2_remainder",
            why: format!("beta = {} (defined for the uniform family only)", dist.beta()),
        });
    }
    require_full_support(dist, "t2_remainder")?;
    if n < 2 {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            domain: "[2, inf)",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            domain: "(0, inf)",
        });
    }
    let nf = n as f64;
    let c2 = nf * (nf - 1.0) / 2.0;
    let c3 = c2 * (nf - 2.0) / 3.0;
    let c4 = c3 * (nf - 3.0) / 4.0;
    // sum_{j>J} (j+1)^-i over integral brackets.
    let s_lo = |i: i32, j: f64| (j + 2.0).powi(1 - i) / (i as f64 - 1.0);
    let s_hi = |i: i32, j: f64| (j + 1.0).powi(1 - i) / (i as f64 - 1.0);
    let bracket = |j: f64| {
        let lo = c2 * s_lo(2, j) - c3 * s_hi(3, j);
        let hi = c2 * s_hi(2, j) - c3 * s_lo(3, j) + c4 * s_hi(4, j);
        (lo, hi)
    };
    let mut cut = (2 * n).max(16);
    loop {
        let (lo, hi) = bracket(cut as f64);
        if (hi - lo) / 2.0 <= tol {
            break;
        }
        cut *= 2;
        if cut > TERM_CAP {
            return Err(Error::ToleranceUnreachable {
                needed: cut,
                cap: TERM_CAP,
            });
        }
    }
    // (1-m)^n - 1 + n m, in blocks so rayon can help at large cuts.
    let block = 1u64 << 16;
    let blocks: Vec<f64> = (0..cut.div_ceil(block))
        .into_par_iter()
        .map(|b| {
            let start = b * block + 1;
            let end = ((b + 1) * block).min(cut);
            let mut acc = NeumaierSum::new();
            for j in start..=end {
                let m = 1.0 / (j as f64 + 1.0);
                acc.add(nf * m + (nf * (-m).ln_1p()).exp_m1());
            }
            acc.value()
        })
        .collect();
    let mut acc = NeumaierSum::new();
    for v in blocks {
        acc.add(v);
    }
    let (lo, hi) = bracket(cut as f64);
    Ok(-(acc.value() + 0.5 * (lo + hi)))
}

/// `(1 - x/n)^n` evaluated in log space next to its second-order expansion
/// `e^-x (1 - x^2/(2n))`; a test utility for the exponential limit.
pub fn exp_approx_check(x: f64, n: u64) -> Result<(f64, f64), Error> {
    let nf = n as f64;
    if !(x >= 0.0) || x >= nf {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "[0, n)",
        });
    }
    let exact = (nf * (-x / nf).ln_1p()).exp();
    let approx = (-x).exp() * (1.0 - x * x / (2.0 * nf));
    Ok((exact, approx))
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
