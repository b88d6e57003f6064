//! Counter-based random number generation.
//!
//! Every Gaussian draw is a pure function of `(seed, path, step, channel)`,
//! so a simulation produces bit-identical panels no matter how paths are
//! scheduled across worker threads. There is no mutable generator state to
//! share or split.

/// SplitMix64 finalizer; full-avalanche mix of a 64-bit word.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Collapses a `(seed, path, step, channel)` counter into one well-mixed word.
#[inline]
fn substream(seed: u64, path: u64, step: u64, channel: u64) -> u64 {
    let mut h = mix64(seed ^ GAMMA);
    h = mix64(h.wrapping_add(GAMMA.wrapping_mul(path.wrapping_add(1))));
    h = mix64(h.wrapping_add(GAMMA.wrapping_mul(step.wrapping_add(1))) ^ 0xd1b5_4a32_d192_ed03);
    mix64(h.wrapping_add(GAMMA.wrapping_mul(channel.wrapping_add(1))) ^ 0x8cb9_2ba7_2f3d_8dd7)
}

/// Uniform in the open interval (0, 1) from 53 mantissa bits.
#[inline]
fn to_unit_open(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Standard normal draw for the given counter, via Box-Muller.
#[inline]
pub fn normal_draw(seed: u64, path: u64, step: u64, channel: u64) -> f64 {
    let k = substream(seed, path, step, channel);
    let u1 = to_unit_open(mix64(k ^ 0xa076_1d64_78bd_642f));
    let u2 = to_unit_open(mix64(k ^ 0xe703_7ed1_a0b4_28db));
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Sequential generator for reproducible auxiliary sampling (portfolio
/// generation, test fixtures). Not used on simulation hot paths.
#[derive(Clone, Debug)]
pub struct StreamRng {
    state: u64,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        Self { state: mix64(seed ^ GAMMA) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in (0, 1).
    pub fn uniform(&mut self) -> f64 {
        to_unit_open(self.next_u64())
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in [0, n). Rejection-free modulo is acceptable here:
    /// n is always tiny relative to 2^64 so the bias is unobservable.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    pub fn flip(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Standard normal draw (Box-Muller, cosine branch).
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
