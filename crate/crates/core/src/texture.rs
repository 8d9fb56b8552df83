//! Texture storage, addressing and deterministic ground-truth filtering,
//! plus the pluggable texel-producer interface with cost accounting.

use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::filters::{footprint, FilterKind};
use crate::geom::{ivec2, IVec2, Rgba};
use crate::rng::hash_mix;
use crate::scalar::Real;

/// Clamp-to-edge addressing.
pub fn clamp_coords(c: IVec2, dims: IVec2) -> IVec2 {
    ivec2(c.x.clamp(0, dims.x - 1), c.y.clamp(0, dims.y - 1))
}

/// An immutable RGBA texture, row-major.
#[derive(Debug, Clone)]
pub struct Texture<S> {
    dims: IVec2,
    texels: Vec<Rgba<S>>,
}

impl<S: Real> Texture<S> {
    pub fn new(dims: IVec2, texels: Vec<Rgba<S>>) -> Self {
        assert!(dims.x >= 2 && dims.y >= 2, "texture dims must be >= 2 per axis");
        assert_eq!(texels.len(), (dims.x * dims.y) as usize);
        debug_assert!(texels.iter().all(|t| {
            t.r.is_finite() && t.g.is_finite() && t.b.is_finite() && t.a.is_finite()
        }));
        Texture { dims, texels }
    }

    pub fn from_fn(dims: IVec2, mut f: impl FnMut(i32, i32) -> Rgba<S>) -> Self {
        let mut texels = Vec::with_capacity((dims.x * dims.y) as usize);
        for y in 0..dims.y {
            for x in 0..dims.x {
                texels.push(f(x, y));
            }
        }
        Texture::new(dims, texels)
    }

    pub fn dims(&self) -> IVec2 {
        self.dims
    }

    /// Texel at exactly `c`; `c` must be in bounds.
    pub fn texel(&self, c: IVec2) -> Rgba<S> {
        self.texels[(c.y * self.dims.x + c.x) as usize]
    }

    /// Texel at `c` with clamp-to-edge addressing.
    pub fn fetch(&self, c: IVec2) -> Rgba<S> {
        self.texel(clamp_coords(c, self.dims))
    }

    pub fn texels(&self) -> &[Rgba<S>] {
        &self.texels
    }

    /// Constant texture.
    pub fn constant(dims: IVec2, c: Rgba<S>) -> Self {
        Texture::from_fn(dims, |_, _| c)
    }

    /// Checkerboard with `cell`-sized squares alternating between `a` and `b`.
    pub fn checker(dims: IVec2, cell: i32, a: Rgba<S>, b: Rgba<S>) -> Self {
        assert!(cell >= 1);
        Texture::from_fn(dims, |x, y| {
            if ((x / cell) + (y / cell)) % 2 == 0 {
                a
            } else {
                b
            }
        })
    }

    /// Horizontal/vertical gradient ramps in r/g, constant b, opaque alpha.
    pub fn gradient(dims: IVec2) -> Self {
        Texture::from_fn(dims, |x, y| {
            Rgba::new(
                S::of(x as f64 / (dims.x - 1) as f64),
                S::of(y as f64 / (dims.y - 1) as f64),
                S::half(),
                S::one(),
            )
        })
    }

    /// Multi-octave value noise with a per-texel detail octave,
    /// deterministic in `seed`. Channels are decorrelated; alpha is 1.
    pub fn value_noise(dims: IVec2, seed: u64) -> Self {
        let lattice = |x: i64, y: i64, ch: u64| -> f64 {
            let h = hash_mix(&[seed, ch, x as u64, y as u64]);
            (h >> 11) as f64 / (1u64 << 53) as f64
        };
        let sample = |x: f64, y: f64, ch: u64| -> f64 {
            let x0 = x.floor();
            let y0 = y.floor();
            let fx = x - x0;
            let fy = y - y0;
            let sx = fx * fx * (3.0 - 2.0 * fx);
            let sy = fy * fy * (3.0 - 2.0 * fy);
            let (x0, y0) = (x0 as i64, y0 as i64);
            let v00 = lattice(x0, y0, ch);
            let v10 = lattice(x0 + 1, y0, ch);
            let v01 = lattice(x0, y0 + 1, ch);
            let v11 = lattice(x0 + 1, y0 + 1, ch);
            let a = v00 + (v10 - v00) * sx;
            let b = v01 + (v11 - v01) * sx;
            a + (b - a) * sy
        };
        Texture::from_fn(dims, |x, y| {
            let mut c = [0.0f64; 3];
            for (ch, v) in c.iter_mut().enumerate() {
                let mut amp = 0.35;
                let mut freq = 8.0 / dims.x as f64;
                let mut acc = 0.0;
                for _ in 0..4 {
                    acc += amp * sample(x as f64 * freq, y as f64 * freq, ch as u64);
                    amp *= 0.5;
                    freq *= 2.0;
                }
                // Texel-frequency detail, like the fine grain of scanned
                // material textures.
                acc += 0.45 * lattice(x as i64, y as i64, 16 + ch as u64);
                *v = acc.clamp(0.0, 1.0);
            }
            Rgba::new(S::of(c[0]), S::of(c[1]), S::of(c[2]), S::one())
        })
    }

    /// A bumpy tangent-space normal map derived from value-noise heights,
    /// encoded into [0,1]^3.
    pub fn noise_normal_map(dims: IVec2, seed: u64) -> Self {
        let heights = Texture::<f64>::value_noise(dims, seed);
        let h = |x: i32, y: i32| heights.fetch(ivec2(x, y)).r;
        Texture::from_fn(dims, |x, y| {
            let dx = (h(x + 1, y) - h(x - 1, y)) * 2.0;
            let dy = (h(x, y + 1) - h(x, y - 1)) * 2.0;
            let len = (dx * dx + dy * dy + 1.0).sqrt();
            let n = [-dx / len, -dy / len, 1.0 / len];
            Rgba::new(
                S::of(n[0] * 0.5 + 0.5),
                S::of(n[1] * 0.5 + 0.5),
                S::of(n[2] * 0.5 + 0.5),
                S::one(),
            )
        })
    }

    /// Load an image file (PNG or PPM/PNM) into a linear [0,1] texture.
    pub fn load(path: &Path) -> Result<Self, image::ImageError> {
        let img = image::open(path)?.to_rgba8();
        let dims = ivec2(img.width() as i32, img.height() as i32);
        let texels = img
            .pixels()
            .map(|p| {
                Rgba::new(
                    S::of(p.0[0] as f64 / 255.0),
                    S::of(p.0[1] as f64 / 255.0),
                    S::of(p.0[2] as f64 / 255.0),
                    S::of(p.0[3] as f64 / 255.0),
                )
            })
            .collect();
        Ok(Texture::new(dims, texels))
    }
}

/// Deterministic full filtering: the oracle every collaborative path is
/// compared against. Weighted sum over the footprint with clamped fetches.
pub fn ground_truth_filter<S: Real>(tex: &Texture<S>, uv: [S; 2], kind: FilterKind) -> Rgba<S> {
    let fp = footprint(uv, tex.dims(), kind);
    fp.filter(|c| tex.fetch(c))
}

/// Monotone cost counters. Shared by reference so concurrent waves can
/// account into one producer; merging is plain addition.
#[derive(Debug, Default)]
pub struct CostCounters {
    texel_evaluations: AtomicU64,
    work_units: AtomicU64,
}

impl CostCounters {
    pub fn add_evaluation(&self) {
        self.texel_evaluations.fetch_add(1, Ordering::Relaxed);
    }

    pub fn add_work(&self, units: u64) {
        self.work_units.fetch_add(units, Ordering::Relaxed);
    }

    pub fn texel_evaluations(&self) -> u64 {
        self.texel_evaluations.load(Ordering::Relaxed)
    }

    pub fn work_units(&self) -> u64 {
        self.work_units.load(Ordering::Relaxed)
    }
}

/// A pluggable texel-evaluation backend: direct fetch, decompression, or any
/// other way of materializing a texel. `produce` must be deterministic.
pub trait TexelProducer<S: Real> {
    fn produce(&self, coords: IVec2) -> Rgba<S>;
    fn counters(&self) -> &CostCounters;
}

/// Direct texel fetch from an uncompressed texture.
pub struct DirectProducer<'a, S> {
    texture: &'a Texture<S>,
    counters: CostCounters,
}

impl<'a, S: Real> DirectProducer<'a, S> {
    pub fn new(texture: &'a Texture<S>) -> Self {
        DirectProducer {
            texture,
            counters: CostCounters::default(),
        }
    }
}

impl<S: Real> TexelProducer<S> for DirectProducer<'_, S> {
    fn produce(&self, coords: IVec2) -> Rgba<S> {
        self.counters.add_evaluation();
        self.texture.fetch(coords)
    }

    fn counters(&self) -> &CostCounters {
        &self.counters
    }
}
