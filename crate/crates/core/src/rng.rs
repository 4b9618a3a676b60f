//! Deterministic 64-bit mixing and a small seeded generator.
//!
//! Every source of randomness in this crate draws from [`SplitMix64`],
//! seeded explicitly by the caller; nothing reads ambient entropy. Runs are
//! therefore reproducible bit-for-bit from their seed alone, on any
//! platform. The lottery ticket hash in [`crate::stdma`] uses the same
//! [`mix64`] finalizer, so one documented construction covers the whole
//! crate.

/// Increment used by [`SplitMix64`] and folded into ticket draws.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit xorshift-multiply finalizer (the splitmix64 output stage).
///
/// Bijective on `u64`; `mix64(0) == 0`.
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    x
}

/// Small deterministic generator (splitmix64).
///
/// Not cryptographic. Used for topology generation, removal orders and
/// baseline ticket draws, where the only requirements are decent statistical
/// quality and exact reproducibility from a seed.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    /// Generator whose output stream is fully determined by `seed`.
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Next raw 64-bit draw.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform float in `[0, 1)` with 53 significant bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` via fixed-point multiply.
    ///
    /// The residual bias is below 2⁻⁵⁶ for the bounds used here, and unlike
    /// rejection sampling the draw count per call is constant, which keeps
    /// downstream streams aligned.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0, "next_below needs a nonzero bound");
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
