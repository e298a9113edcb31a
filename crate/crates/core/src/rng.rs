//! Counter-based randomness.
//!
//! Every random quantity in the crate is a pure function of a 64-bit key, so
//! results never depend on evaluation order or thread count. The scheme is
//! fixed bit-for-bit:
//!
//! ```text
//! mix64(z):  z = z + 0x9E3779B97F4A7C15            (wrapping)
//!            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!            z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!            return z ^ (z >> 31)
//!
//! derive_seed(master, index, tag) = mix64(mix64(mix64(master) ^ index) ^ tag)
//! keyed_unit(seed, a, b, c)       = unit(mix64(derive_seed(seed, a, b) ^ c))
//! unit(k)                         = ((k >> 11) + 1) * 2^-53          in (0, 1]
//! ```
//!
//! Signed coordinates enter as their two's-complement `u64` image.

/// Stream tag for lattice weights.
pub const WEIGHT_STREAM: u64 = 0x5745_4947_4854;
/// Stream tag for TASEP clock rings.
pub const CLOCK_STREAM: u64 = 0x0043_4c4f_434b;
/// Stream tag for residual weights beyond a simulated horizon.
pub const RESIDUAL_STREAM: u64 = 0x0052_4553_4944;
/// Stream tag for random initial configurations.
pub const CONFIG_STREAM: u64 = 0x434f_4e46;

#[inline]
pub fn mix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replica `index` under `master`, for a named stream `tag`.
#[inline]
pub fn derive_seed(master: u64, index: u64, tag: u64) -> u64 {
    mix64(mix64(mix64(master) ^ index) ^ tag)
}

/// Maps 64 random bits to a uniform in (0, 1].
#[inline]
pub fn unit(k: u64) -> f64 {
    ((k >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
pub fn keyed_unit(seed: u64, a: u64, b: u64, c: u64) -> f64 {
    unit(mix64(derive_seed(seed, a, b) ^ c))
}

/// Exponential variate with the given mean from a uniform in (0, 1].
#[inline]
pub fn exp_from_unit(mean: f64, u: f64) -> f64 {
    if mean == 0.0 {
        0.0
    } else {
        -mean * u.ln()
    }
}

/// Sequential draws from a single key; `next` is `keyed_unit(seed, tag, counter, 0)`.
#[derive(Clone, Debug)]
pub struct Stream {
    seed: u64,
    tag: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: u64, tag: u64) -> Self {
        Stream { seed, tag, counter: 0 }
    }

    pub fn next_unit(&mut self) -> f64 {
        let u = keyed_unit(self.seed, self.tag, self.counter, 0);
        self.counter += 1;
        u
    }

    pub fn next_exp(&mut self, mean: f64) -> f64 {
        exp_from_unit(mean, self.next_unit())
    }

    /// Uniform integer in `0..bound`.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        ((self.next_unit() * bound as f64) as u64).min(bound.saturating_sub(1))
    }

    pub fn next_bit(&mut self) -> u8 {
        (self.next_unit() <= 0.5) as u8
    }
}
