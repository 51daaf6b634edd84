//! Portable pseudo-random generator used by the simulation and the bots.
//!
//! The generator is xorshift64* (Vigna, 2016): a 64-bit xorshift with shifts
//! (12, 25, 27) followed by multiplication with `0x2545F4914F6CDD1D`. Seeds are
//! expanded with one round of SplitMix64 so that small seeds (0, 1, 2, ...) do
//! not start in low-entropy states. Every operation is defined on `u64`
//! arithmetic only, so ports in other languages reproduce identical streams.

const XORSHIFT_MULT: u64 = 0x2545_F491_4F6C_DD1D;
/// Substituted when SplitMix64 maps a seed to the (absorbing) zero state.
const ZERO_STATE_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 output for `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        Self::from_raw_state(splitmix64(seed))
    }

    /// A stream derived from `seed` but independent of `Rng::from_seed(seed)`.
    pub fn with_domain(seed: u64, domain: u64) -> Self {
        Self::from_raw_state(splitmix64(splitmix64(seed) ^ domain))
    }

    pub fn from_raw_state(state: u64) -> Self {
        let state = if state == 0 { ZERO_STATE_REPLACEMENT } else { state };
        Self { state }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_MULT)
    }

    /// Uniform index in `0..n` by multiply-high reduction. `n` must be non-zero.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "Rng::below called with n = 0");
        ((u128::from(self.next_u64()) * u128::from(n)) >> 64) as u64
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
