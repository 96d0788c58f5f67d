//! Numerical laboratory for the learning times of three concept-learning
//! strategies under random overlaps.
//!
//! A teacher emits words for a target concept; each of `n` wrong concepts
//! shares a random overlap `p_i` with the target. The crate provides
//!
//! - [`overlap`]: the power family of overlap laws (`q = 1 - p` has density
//!   `c q^beta`), sampling, CDF, and exact/asymptotic moments;
//! - [`exact`]: quenched batch-learning quantities for a fixed vector —
//!   learning probabilities, the expected-time series with certified
//!   truncation, the inclusion-exclusion oracle, `N_Delta`, and envelope
//!   bounds;
//! - [`zeta`]: the moment zeta function and the annealed expected time,
//!   including the sublinear-regime limit constant and the `n ln n`
//!   correction term of the uniform family;
//! - [`simulate`]: reproducible counter-based simulators for the batch,
//!   memoryless, and full-memory learners;
//! - [`sweep`]: parameter sweeps, robust statistics, exponent fits, and the
//!   named verification suites behind `batchlab verify`.

pub mod error;
pub mod exact;
pub mod overlap;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod special;
pub mod stats;
pub mod suite;
pub mod sweep;
pub mod thresholds;
pub mod zeta;

pub use error::Error;
pub use exact::ExactTimeResult;
pub use overlap::{OverlapDistribution, OverlapVector};
pub use simulate::{Algorithm, Mode, SampleSource, TimeSampleSet};
pub use stats::{PowerFit, Statistic};
pub use sweep::{Check, Suite, SuiteReport, SweepReport, SweepRow, SweepSpec};
pub use zeta::{AnnealedTimeCurve, ZetaEvaluation};

pub type Result<T> = std::result::Result<T, Error>;
