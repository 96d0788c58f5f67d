use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("beta must be greater than -1 for an integrable density, got {0}")]
    BetaOutOfRange(f64),

    #[error("support_max must lie in (0, 1], got {0}")]
    SupportMaxOutOfRange(f64),

    #[error("overlap values must lie in [0, 1), got {0}")]
    OverlapOutOfRange(f64),

    #[error("{name} = {value} must lie in {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("moment zeta series diverges at s = {s}; defined only for s > {threshold}")]
    ZetaDiverges { s: f64, threshold: f64 },

    #[error("annealed expectation does not exist for beta = {beta}; use quantile statistics")]
    AnnealedDiverges { beta: f64 },

    #[error("{op} supports at most n = {max}, got {n}")]
    SizeLimit {
        op: &'static str,
        n: usize,
        max: usize,
    },

    #[error("series truncation needs about {needed} terms, above the cap of {cap}")]
    ToleranceUnreachable { needed: u64, cap: u64 },

    #[error("{op} is unsupported for {why}")]
    Unsupported { op: &'static str, why: String },

    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),

    #[error("invalid sweep spec: {0}")]
    InvalidSweepSpec(String),

    #[error("empty sample set")]
    EmptySamples,
}
