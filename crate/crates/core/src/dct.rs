//! Block-based DCT-compressed textures.
//!
//! A proof-of-concept expensive texel producer: each channel of each 8x8
//! block is stored as unquantized DCT-II coefficients, and producing a texel
//! means inverse-transforming the channel blocks it lives in. The cost unit
//! ("work unit") is one 8x8 channel-block inverse transform; a full RGB
//! texel costs 3. When a wave needs few texels, lanes can decode a single
//! channel each and assemble full texels through wave reads, cutting the
//! per-lane critical path from 3 work units to 1.

use crate::geom::{ivec2, IVec2, Rgba};
use crate::scalar::Real;
use crate::texture::{clamp_coords, CostCounters, TexelProducer, Texture};
use crate::wave::{LaneVec, Wave};

pub const BLOCK: usize = 8;
const CHANNELS: usize = 3;

/// Largest texel count for which the split-channel collaborative decode
/// applies in a 32-lane wave (3 lanes per texel).
pub const COLLABORATIVE_MAX_TEXELS: usize = 10;

/// Orthonormal 8x8 DCT-II basis, row `k` = frequency, column `n` = sample.
fn basis<S: Real>() -> [[S; BLOCK]; BLOCK] {
    let mut c = [[S::zero(); BLOCK]; BLOCK];
    for (k, row) in c.iter_mut().enumerate() {
        let scale = if k == 0 {
            (1.0f64 / BLOCK as f64).sqrt()
        } else {
            (2.0f64 / BLOCK as f64).sqrt()
        };
        for (n, v) in row.iter_mut().enumerate() {
            let angle = std::f64::consts::PI * (2.0 * n as f64 + 1.0) * k as f64
                / (2.0 * BLOCK as f64);
            *v = S::of(scale * angle.cos());
        }
    }
    c
}

/// DCT-compressed texture: per-channel 8x8 coefficient blocks, RGB only
/// (alpha decodes as 1).
#[derive(Debug, Clone)]
pub struct DctTexture<S> {
    dims: IVec2,
    blocks_x: i32,
    blocks_y: i32,
    /// coeffs[(block_index * CHANNELS + channel) * 64 + u * 8 + v]
    coeffs: Vec<S>,
    basis: [[S; BLOCK]; BLOCK],
}

impl<S: Real> DctTexture<S> {
    /// Forward-transform every 8x8 channel block of `tex`. Blocks at the
    /// right/bottom edge are padded by edge replication.
    pub fn compress(tex: &Texture<S>) -> Self {
        let dims = tex.dims();
        let blocks_x = (dims.x + BLOCK as i32 - 1) / BLOCK as i32;
        let blocks_y = (dims.y + BLOCK as i32 - 1) / BLOCK as i32;
        let basis = basis::<S>();
        let mut coeffs =
            vec![S::zero(); (blocks_x * blocks_y) as usize * CHANNELS * BLOCK * BLOCK];

        for by in 0..blocks_y {
            for bx in 0..blocks_x {
                let block_index = (by * blocks_x + bx) as usize;
                for ch in 0..CHANNELS {
                    // Gather the (edge-clamped) spatial block.
                    let mut f = [[S::zero(); BLOCK]; BLOCK];
                    for (y, row) in f.iter_mut().enumerate() {
                        for (x, v) in row.iter_mut().enumerate() {
                            let c = clamp_coords(
                                ivec2(bx * BLOCK as i32 + x as i32, by * BLOCK as i32 + y as i32),
                                dims,
                            );
                            *v = tex.texel(c).channel(ch);
                        }
                    }
                    // F = C f C^T
                    let base = (block_index * CHANNELS + ch) * BLOCK * BLOCK;
                    for u in 0..BLOCK {
                        for v in 0..BLOCK {
                            let mut acc = S::zero();
                            for (y, row) in f.iter().enumerate() {
                                for (x, fv) in row.iter().enumerate() {
                                    acc += basis[v][x] * basis[u][y] * *fv;
                                }
                            }
                            coeffs[base + u * BLOCK + v] = acc;
                        }
                    }
                }
            }
        }
        DctTexture {
            dims,
            blocks_x,
            blocks_y,
            coeffs,
            basis,
        }
    }

    pub fn dims(&self) -> IVec2 {
        self.dims
    }

    /// Inverse-transform one channel of the block containing `coords` and
    /// return the sample there. Costs one work unit on `counters`.
    pub fn decode_channel(&self, channel: usize, coords: IVec2, counters: &CostCounters) -> S {
        let c = clamp_coords(coords, self.dims);
        let bx = c.x / BLOCK as i32;
        let by = c.y / BLOCK as i32;
        let lx = (c.x % BLOCK as i32) as usize;
        let ly = (c.y % BLOCK as i32) as usize;
        debug_assert!(bx < self.blocks_x && by < self.blocks_y);
        let base = ((by * self.blocks_x + bx) as usize * CHANNELS + channel) * BLOCK * BLOCK;

        counters.add_work(1);
        // f[y][x] = sum_u sum_v C[u][y] F[u][v] C[v][x]
        let mut acc = S::zero();
        for u in 0..BLOCK {
            let cu = self.basis[u][ly];
            for v in 0..BLOCK {
                acc += cu * self.basis[v][lx] * self.coeffs[base + u * BLOCK + v];
            }
        }
        acc
    }

    /// Full single-lane texel decode: all three channels in sequence.
    pub fn decode_texel(&self, coords: IVec2, counters: &CostCounters) -> Rgba<S> {
        let mut out = Rgba::new(S::zero(), S::zero(), S::zero(), S::one());
        for ch in 0..CHANNELS {
            out.set_channel(ch, self.decode_channel(ch, coords, counters));
        }
        out
    }

    /// Decompress the whole texture (test/reference path).
    pub fn decompress(&self, counters: &CostCounters) -> Texture<S> {
        Texture::from_fn(self.dims, |x, y| self.decode_texel(ivec2(x, y), counters))
    }
}

/// Split-channel collaborative decode: lane k decodes channel `k % 3` of
/// texel `k / 3`, then lanes 0..n assemble full colors through wave reads.
/// Every participating lane does exactly one channel-block transform, so the
/// per-lane critical path is 1 work unit instead of 3.
///
/// Returns None when more than [`COLLABORATIVE_MAX_TEXELS`] texels are
/// requested or the wave has too few active lanes; callers then fall back to
/// per-lane full decodes.
pub fn collaborative_dct_produce<S: Real>(
    wave: &Wave,
    texels: &[IVec2],
    dct: &DctTexture<S>,
    counters: &CostCounters,
) -> Option<LaneVec<Rgba<S>>> {
    let n = texels.len();
    if n == 0 || n > COLLABORATIVE_MAX_TEXELS {
        return None;
    }
    if !wave.lanes_lower_than_count_active((CHANNELS * n) as u32) {
        return None;
    }

    let mut channel_vals = LaneVec::<S>::new();
    for lane in 0..(CHANNELS * n) as u32 {
        let texel = lane as usize / CHANNELS;
        let channel = lane as usize % CHANNELS;
        channel_vals.set(lane, dct.decode_channel(channel, texels[texel], counters));
    }

    let mut out = LaneVec::new();
    for lane in 0..n as u32 {
        let mut color = Rgba::new(S::zero(), S::zero(), S::zero(), S::one());
        for ch in 0..CHANNELS {
            color.set_channel(ch, wave.read_lane_at(&channel_vals, lane * CHANNELS as u32 + ch as u32));
        }
        counters.add_evaluation();
        out.set(lane, color);
    }
    Some(out)
}

/// Texel producer backed by a DCT texture: one evaluation = 3 work units.
pub struct DctProducer<'a, S> {
    dct: &'a DctTexture<S>,
    counters: CostCounters,
}

impl<'a, S: Real> DctProducer<'a, S> {
    pub fn new(dct: &'a DctTexture<S>) -> Self {
        DctProducer {
            dct,
            counters: CostCounters::default(),
        }
    }

    pub fn texture(&self) -> &DctTexture<S> {
        self.dct
    }
}

impl<S: Real> TexelProducer<S> for DctProducer<'_, S> {
    fn produce(&self, coords: IVec2) -> Rgba<S> {
        self.counters.add_evaluation();
        self.dct.decode_texel(coords, &self.counters)
    }

    fn counters(&self) -> &CostCounters {
        &self.counters
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dc_only_block_is_constant() {
        let tex = Texture::constant(ivec2(8, 8), Rgba::new(0.25f64, 0.5, 0.75, 1.0));
        let dct = DctTexture::compress(&tex);
        // A constant block has only the DC coefficient set.
        for ch in 0..3 {
            for k in 1..64 {
                assert!(dct.coeffs[ch * 64 + k].abs() < 1e-12, "AC coeff not zero");
            }
        }
        let counters = CostCounters::default();
        for c in [ivec2(0, 0), ivec2(3, 5), ivec2(7, 7)] {
            let t = dct.decode_texel(c, &counters);
            assert!(t.max_abs_diff(&tex.texel(c)) < 1e-12);
        }
    }

    #[test]
    fn round_trip_within_tolerance() {
        // Forward/inverse DCT oracle: decompress(compress(T)) ~= T.
        let tex = Texture::<f32>::value_noise(ivec2(24, 16), 11);
        let dct = DctTexture::compress(&tex);
        let counters = CostCounters::default();
        let back = dct.decompress(&counters);
        for (a, b) in tex.texels().iter().zip(back.texels()) {
            assert!(a.max_abs_diff(b) < 1e-4);
        }
    }

    #[test]
    fn single_texel_decode_costs_three_work_units() {
        let tex = Texture::<f32>::gradient(ivec2(16, 16));
        let dct = DctTexture::compress(&tex);
        let counters = CostCounters::default();
        let _ = dct.decode_texel(ivec2(4, 4), &counters);
        assert_eq!(counters.work_units(), 3);
    }

    #[test]
    fn collaborative_matches_single_lane_decode_exactly() {
        let tex = Texture::<f32>::value_noise(ivec2(32, 32), 3);
        let dct = DctTexture::compress(&tex);
        let wave = Wave::full();
        let texels = [ivec2(1, 2), ivec2(9, 9), ivec2(17, 30), ivec2(0, 0)];
        let counters = CostCounters::default();
        let out = collaborative_dct_produce(&wave, &texels, &dct, &counters).unwrap();
        let seq = CostCounters::default();
        for (i, &c) in texels.iter().enumerate() {
            assert_eq!(out.get(i as u32), dct.decode_texel(c, &seq));
        }
        assert_eq!(wave.unread_lane_reads(), 0);
    }

    #[test]
    fn collaborative_work_accounting() {
        let tex = Texture::<f32>::gradient(ivec2(32, 32));
        let dct = DctTexture::compress(&tex);
        let wave = Wave::full();
        let texels: Vec<IVec2> = (0..10).map(|i| ivec2(i, i)).collect();
        let counters = CostCounters::default();
        let out = collaborative_dct_produce(&wave, &texels, &dct, &counters);
        assert!(out.is_some());
        // 30 lanes decoded one channel block each: max work per lane is one
        // unit, versus three for a per-lane full decode.
        assert_eq!(counters.work_units(), 30);
    }

    #[test]
    fn eleven_texels_require_full_decode() {
        let tex = Texture::<f32>::gradient(ivec2(32, 32));
        let dct = DctTexture::compress(&tex);
        let wave = Wave::full();
        let texels: Vec<IVec2> = (0..11).map(|i| ivec2(i, i)).collect();
        let counters = CostCounters::default();
        assert!(collaborative_dct_produce(&wave, &texels, &dct, &counters).is_none());
    }
}
