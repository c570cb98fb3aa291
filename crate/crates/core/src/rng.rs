//! Counter-based random numbers.
//!
//! Every draw is a pure function of `(seed, stream, index, lane)`: the key is
//! derived from `(seed, stream)` and the output is the SplitMix64 finalizer
//! applied to `key + counter * GAMMA`, where `counter = 4 * index + lane`.
//! Any window of a two-sided index sequence can therefore be regenerated
//! without state, windows agree on overlaps, and work can be split across
//! threads in any order.
//!
//! Replica streams are derived with [`replica_seed`], so adding replicas to a
//! run never changes the draws of earlier replicas.

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const LANES: u64 = 4;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for replica `replica` of a run seeded with `seed`.
pub fn replica_seed(seed: u64, replica: u64) -> u64 {
    mix64(mix64(seed ^ 0x5851_f42d_4c95_7f2d).wrapping_add(replica.wrapping_mul(GAMMA)))
}

/// Stateless generator keyed on `(seed, stream)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(mix64(seed).wrapping_add(mix64(stream.wrapping_add(GAMMA))));
        Self { key }
    }

    #[inline]
    pub fn u64_at(&self, index: i64, lane: u32) -> u64 {
        debug_assert!((lane as u64) < LANES);
        let counter = (index as u64).wrapping_mul(LANES).wrapping_add(lane as u64);
        mix64(self.key.wrapping_add(counter.wrapping_mul(GAMMA)))
    }

    /// Uniform on the open interval (0, 1).
    #[inline]
    pub fn uniform_at(&self, index: i64, lane: u32) -> f64 {
        ((self.u64_at(index, lane) >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
    }
}
