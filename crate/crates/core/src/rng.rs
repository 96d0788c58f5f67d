//! Deterministic counter-based randomness.
//!
//! Every random quantity in this crate is a pure function of a 64-bit seed and
//! a stream index. A SplitMix64 sequence is itself counter-based (output `i`
//! is `mix64(state + (i+1)*GOLDEN)`), so per-run streams derived with
//! [`stream`] give byte-identical results no matter how runs are scheduled
//! across threads.

pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a fixed avalanche permutation of 64-bit words.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent seed for a tagged sub-domain (vector sampling,
/// bootstrap resampling, per-n cells, ...).
#[inline]
pub fn subseed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag ^ 0xA076_1D64_78BD_642F))
}

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]` with 53 random bits. Used by inverse-CDF overlap
    /// sampling so that the complement overlap never hits exactly zero.
    #[inline]
    pub fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1)`: the `u = 0` edge is mapped to the smallest
    /// positive normal so `ln u` stays finite.
    #[inline]
    pub fn next_f64_positive(&mut self) -> f64 {
        let u = self.next_f64();
        if u > 0.0 {
            u
        } else {
            f64::MIN_POSITIVE
        }
    }

    /// Uniform integer in `[0, bound)` via 128-bit multiply-shift.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

/// The generator for stream `index` of `seed`. Streams with distinct
/// `(seed, index)` pairs are statistically independent.
#[inline]
pub fn stream(seed: u64, index: u64) -> SplitMix64 {
    SplitMix64::new(mix64(seed) ^ mix64(index.wrapping_mul(GOLDEN) ^ 0x1F12_3BB5_159A_55E5))
}
