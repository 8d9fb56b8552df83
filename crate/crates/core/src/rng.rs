//! Counter-based deterministic random numbers.
//!
//! Every draw is a pure function of (seed, frame, sample, pixel, draw index),
//! so renders are reproducible and independent of traversal or thread order.

use crate::geom::IVec2;

#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Hash a key of words into one 64-bit value.
#[inline]
pub fn hash_mix(words: &[u64]) -> u64 {
    let mut h = 0x243F6A8885A308D3u64;
    for &w in words {
        h = splitmix64(h ^ w);
    }
    h
}

/// Draw indices used by the estimators. One number per logical decision,
/// never shared between decisions.
pub mod draw {
    /// Primary stochastic texel selection.
    pub const PRIMARY: u32 = 0;
    /// Negative-lobe selection (positivized one-tap) or the extra texel
    /// selection of the extended fallback.
    pub const SECONDARY: u32 = 1;
}

/// Per-frame random stream; draws are keyed by pixel and draw index.
#[derive(Debug, Clone, Copy)]
pub struct FrameRng {
    pub seed: u64,
    pub frame: u32,
    pub sample: u32,
}

impl FrameRng {
    pub fn new(seed: u64, frame: u32, sample: u32) -> Self {
        FrameRng { seed, frame, sample }
    }

    /// Uniform in [0, 1), deterministic in the full key.
    pub fn unit(&self, pixel: IVec2, draw: u32) -> f64 {
        let h = hash_mix(&[
            self.seed,
            ((self.frame as u64) << 32) | self.sample as u64,
            ((pixel.x as u32 as u64) << 32) | pixel.y as u32 as u64,
            draw as u64,
        ]);
        (h >> 11) as f64 / (1u64 << 53) as f64
    }
}
