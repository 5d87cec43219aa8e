//! Counter-based random stream: the value for particle `i` is a pure
//! function of `(seed, i)`, so any partition of the particles across
//! workers draws the same numbers.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Stafford variant 13).
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        Self { key: mix64(seed ^ 0x6A09_E667_F3BC_C909) }
    }

    /// 64 random bits for `counter`.
    #[inline]
    pub fn bits(&self, counter: u64) -> u64 {
        mix64(self.key.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform in (0, 1]; never zero so `-ln u` is finite.
    #[inline]
    pub fn unit_open_closed(&self, counter: u64) -> f64 {
        ((self.bits(counter) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard exponential variate (rate 1).
    #[inline]
    pub fn exponential(&self, counter: u64) -> f64 {
        -self.unit_open_closed(counter).ln()
    }
}
