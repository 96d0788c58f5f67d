//! Frozen pass bands for the verification suites.
//!
//! The limit theorems assert convergence, not rates, so every finite-size
//! band below was fixed once — either from the closed-form identity in
//! question or from a 10x-larger calibration run — and is versioned here.
//! The acceptance suite reads these constants and nothing else.

pub const THRESHOLDS_VERSION: &str = "1";

/// Absolute gap allowed between the series engine and the
/// inclusion-exclusion oracle on small vectors.
pub const EXACT_ORACLE_ABS_TOL: f64 = 1e-8;

/// Absolute tolerance for hand-computable closed-form identities.
pub const IDENTITY_ABS_TOL: f64 = 1e-10;

/// Monte Carlo mean vs exact expected time, in standard errors.
pub const SIM_ENGINE_SE_FACTOR: f64 = 4.0;

/// Dvoretzky-Kiefer-Wolfowitz band for the batch CDF identity at 1e5 runs.
pub const DKW_BAND: f64 = 1e-2;

/// Absolute tolerance on the zeta spot values.
pub const ZETA_ABS_TOL: f64 = 1e-8;

/// Monte Carlo band for the zeta-lemma estimate at 1e6 runs.
pub const ZETA_LEMMA_MC_TOL: f64 = 1e-2;

/// Relative gap of `annealed_time(beta=1, n=1e6)/sqrt(n)` from sqrt(2 pi).
pub const T1_DESK_REL_TOL: f64 = 0.05;

/// Convergence ladder for the same ratio at n = 1e4, 1e5, 1e6. Calibrated:
/// the measured gaps are 0.40%, 0.13%, 0.04%.
pub const T1_LADDER: [(u64, f64); 3] = [(10_000, 0.10), (100_000, 0.06), (1_000_000, 0.03)];

/// Relative agreement between the direct and alternating annealed forms.
pub const ALTERNATING_REL_TOL: f64 = 1e-6;

/// Band for `-T2(n) / (n ln n)` at n in {2^14, 2^15, 2^16}.
pub const T2_SCALED_BAND: (f64, f64) = (0.8, 1.2);

/// Allowed relative variation of `(-T2 - n ln n)/n` across those doublings.
pub const T2_DRIFT_REL: f64 = 0.5;

/// Relative gap of the scaled mean minimum complement overlap from
/// `Gamma(1 + 1/(1+beta))`.
pub const EXPMIN_REL_TOL: f64 = 0.03;

/// KS caps for the scaled-minimum law against `1 - exp(-x^(1+beta))`
/// at n = 1e4 and 1e5 ensembles.
pub const WEIBULL_KS_MAX_BETA0: f64 = 0.010;
pub const WEIBULL_KS_MAX_BETA1: f64 = 0.015;

/// beta > 0: every median(S/n) grid point within this relative band of the
/// law-of-large-numbers center `(beta+1)/beta`. Calibrated at n = 2^20
/// (measured 1.9994 against center 2 for beta = 1).
pub const ALLSTAB_LLN_REL_BAND: f64 = 0.10;

/// beta = 0: band for median(S/(n ln n)) at n >= 2^14 (measured ~1.17).
pub const ALLSTAB_LOG_BAND: (f64, f64) = (0.75, 1.25);
pub const ALLSTAB_LOG_MIN_N: u64 = 1 << 14;

/// beta < 0: max/min ratio of the IQR of S/n^(1/(1+beta)) across doublings.
pub const ALLSTAB_IQR_FACTOR: f64 = 2.0;

/// Exponent bands for the batch N_Delta fits.
pub const BATCHTHM_EXP_TOL_UNIFORM: f64 = 0.08;
pub const BATCHTHM_EXP_TOL_POSITIVE: f64 = 0.08;
pub const BATCHTHM_EXP_TOL_NEGATIVE: f64 = 0.15;

/// beta = 0: max/min ratio of median(N_Delta)/n across the grid. The limit
/// band is approached from above; calibrated drift at the 2^8..2^13 grid is
/// about 1.3x.
pub const BATCHTHM_LINEAR_RATIO_MAX: f64 = 2.0;

/// Simulated-learner bands.
pub const MAINPREV_NLOGN_FACTOR: f64 = 3.0;
pub const MAINPREV_EXP_TOL_POSITIVE: f64 = 0.1;
pub const MAINPREV_EXP_TOL_NEGATIVE: f64 = 0.2;

/// Comparison checks apply from this size on (strict batch superiority at
/// beta = 1 needs the sqrt(n)-vs-n gap to clear the noise floor).
pub const COMPARE_STRICT_MIN_N: u64 = 256;
