//! The overlap model: each wrong concept shares a random overlap `p` with the
//! target, and `q = 1 - p` follows the power density `h(q) = c q^beta` on
//! `[0, support_max]`. All learning-time regimes are controlled by `beta`,
//! the exponent of the density near `p = 1`.

use crate::error::Error;
use crate::quad;
use crate::rng::{self, SplitMix64};
use crate::special::ln_gamma;
use serde::{Deserialize, Serialize};

/// Stream tag reserved for standalone overlap sampling; ensemble runs use
/// stream indices `0..runs`, so the two can never collide.
pub(crate) const OVERLAP_STREAM: u64 = u64::MAX;

/// Power-family law of a single overlap.
///
/// `q = 1 - p` has density `c q^beta` on `[0, a]` with `c = (beta+1)/a^(beta+1)`,
/// so the density integrates to one exactly and every asymptotic constant in
/// the limit theorems is explicit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistParams", into = "DistParams")]
pub struct OverlapDistribution {
    beta: f64,
    support_max: f64,
    norm: f64,
    inv_alpha: f64,
}

#[derive(Clone, Copy, Serialize, Deserialize)]
struct DistParams {
    beta: f64,
    support_max: f64,
}

impl TryFrom<DistParams> for OverlapDistribution {
    type Error = Error;
    fn try_from(p: DistParams) -> Result<Self, Error> {
        OverlapDistribution::new(p.beta, p.support_max)
    }
}

impl From<OverlapDistribution> for DistParams {
    fn from(d: OverlapDistribution) -> Self {
        DistParams {
            beta: d.beta,
            support_max: d.support_max,
        }
    }
}

impl OverlapDistribution {
    pub fn new(beta: f64, support_max: f64) -> Result<Self, Error> {
        if !beta.is_finite() || beta <= -1.0 {
            return Err(Error::BetaOutOfRange(beta));
        }
        if !support_max.is_finite() || support_max <= 0.0 || support_max > 1.0 {
            return Err(Error::SupportMaxOutOfRange(support_max));
        }
        let norm = (beta + 1.0) / support_max.powf(beta + 1.0);
        Ok(Self {
            beta,
            support_max,
            norm,
            inv_alpha: 1.0 / (beta + 1.0),
        })
    }

    /// Full-support family (`a = 1`).
    pub fn power(beta: f64) -> Result<Self, Error> {
        Self::new(beta, 1.0)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn support_max(&self) -> f64 {
        self.support_max
    }

    /// Normalization `c = (beta+1)/a^(beta+1)` of the density of `q`.
    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn has_full_support(&self) -> bool {
        self.support_max == 1.0
    }

    /// Inverse-CDF draw of the complement overlap: `q = a * u^(1/(beta+1))`
    /// with `u` uniform in `(0, 1]`.
    ///
    /// `q` is floored at 2^-53, the largest gap `1 - p` can resolve in
    /// an f64 overlap, so `p = 1 - q` stays strictly below one. For
    /// `beta > -0.9` the floored mass is below 1e-8 per draw.
    #[inline]
    pub fn draw_q(&self, rng: &mut SplitMix64) -> f64 {
        const MIN_COMPLEMENT: f64 = f64::EPSILON / 2.0;
        let u = rng.next_f64_open();
        // powf dominates tight sampling loops; the common exponents have
        // exact cheap forms.
        let root = if self.inv_alpha == 1.0 {
            u
        } else if self.inv_alpha == 0.5 {
            u.sqrt()
        } else if self.inv_alpha == 2.0 {
            u * u
        } else {
            u.powf(self.inv_alpha)
        };
        (self.support_max * root).max(MIN_COMPLEMENT)
    }

    /// `n` i.i.d. overlaps, a pure function of `(self, n, seed)`.
    pub fn sample(&self, n: usize, seed: u64) -> OverlapVector {
        let mut g = rng::stream(seed, OVERLAP_STREAM);
        self.sample_with(n, &mut g)
    }

    pub fn sample_with(&self, n: usize, g: &mut SplitMix64) -> OverlapVector {
        let values = (0..n).map(|_| 1.0 - self.draw_q(g)).collect();
        OverlapVector { values }
    }

    /// CDF of the complement overlap: `P(q <= t) = min(1, (t/a)^(beta+1))`.
    pub fn complement_cdf(&self, t: f64) -> Result<f64, Error> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain {
                name: "t",
                value: t,
                domain: "[0, 1]",
            });
        }
        if t >= self.support_max {
            return Ok(1.0);
        }
        Ok((t / self.support_max).powf(self.beta + 1.0))
    }

    /// k-th moment `m_k = E[p^k]`.
    ///
    /// For full support this is the Beta integral
    /// `Gamma(beta+2) Gamma(k+1) / Gamma(k+beta+2)`; truncated supports fall
    /// back to adaptive quadrature at 1e-10 relative accuracy.
    pub fn moment(&self, k: u64) -> f64 {
        assert!(k >= 1, "moments are defined for k >= 1");
        if self.has_full_support() {
            let b = self.beta;
            let kf = k as f64;
            (ln_gamma(b + 2.0) + ln_gamma(kf + 1.0) - ln_gamma(kf + b + 2.0)).exp()
        } else {
            // Substituting u = (q/a)^(beta+1) turns the integral into
            // int_0^1 (1 - a u^(1/(beta+1)))^k du with a bounded integrand.
            let a = self.support_max;
            let inv = 1.0 / (self.beta + 1.0);
            let kf = k as f64;
            let f = |u: f64| {
                if u <= 0.0 {
                    return 1.0;
                }
                let q = a * u.powf(inv);
                if q >= 1.0 {
                    return 0.0;
                }
                (kf * (-q).ln_1p()).exp()
            };
            quad::adaptive_simpson_rel(&f, 0.0, 1.0, 1e-11)
        }
    }

    /// Leading asymptote `c Gamma(beta+1) k^-(beta+1)` of the k-th moment,
    /// which equals `Gamma(beta+2) k^-(beta+1)` for the full-support family.
    pub fn moment_asymptote(&self, k: u64) -> Result<f64, Error> {
        assert!(k >= 1, "moments are defined for k >= 1");
        if !self.has_full_support() {
            return Err(Error::Unsupported {
                op: "moment_asymptote",
                why: format!("support_max = {} < 1", self.support_max),
            });
        }
        let b = self.beta;
        Ok((ln_gamma(b + 2.0) - (b + 1.0) * (k as f64).ln()).exp())
    }
}

/// One realization `(p_1, ..., p_n)` of the overlaps of the `n` wrong
/// concepts. Every entry is strictly below one (an overlap of one would make
/// the concept indistinguishable from the target); `n = 0` means the target
/// is already the only candidate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct OverlapVector {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for OverlapVector {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self, Error> {
        OverlapVector::new(values)
    }
}

impl From<OverlapVector> for Vec<f64> {
    fn from(v: OverlapVector) -> Self {
        v.values
    }
}

impl OverlapVector {
    pub fn new(values: Vec<f64>) -> Result<Self, Error> {
        for &p in &values {
            if !p.is_finite() || !(0.0..1.0).contains(&p) {
                return Err(Error::OverlapOutOfRange(p));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_overlap(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::max)
    }
}
