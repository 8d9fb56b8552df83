//! Filter footprints and weights for bilinear, bicubic B-spline and
//! Catmull-Rom filtering.
//!
//! All consumers share one weight layout: row-major from the footprint's
//! upper-left texel. Every weighted sum in the crate runs through
//! [`FilterFootprint::filter`] so that independently produced texels
//! accumulate in exactly the same order as a direct reference evaluation.

use crate::geom::{ivec2, IVec2, Sample};
use crate::scalar::Real;

pub const MAX_TAPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Bilinear,
    BicubicBSpline,
    CatmullRom,
}

impl FilterKind {
    /// Footprint side length in texels: 2x2 for bilinear, 4x4 for the
    /// bicubic kinds.
    pub fn extent(self) -> u32 {
        match self {
            FilterKind::Bilinear => 2,
            FilterKind::BicubicBSpline | FilterKind::CatmullRom => 4,
        }
    }

    /// Whether the kernel can produce negative weights.
    pub fn has_negative_weights(self) -> bool {
        matches!(self, FilterKind::CatmullRom)
    }
}

/// The N*N texel neighborhood and signed weights a filter needs at one
/// sample point.
#[derive(Debug, Clone, Copy, Default)]
pub struct FilterFootprint<S> {
    pub upper_left: IVec2,
    pub extent: u32,
    pub st: [S; 2],
    weights: [S; MAX_TAPS],
}

impl<S: Real> FilterFootprint<S> {
    pub fn tap_count(&self) -> usize {
        (self.extent * self.extent) as usize
    }

    pub fn weights(&self) -> &[S] {
        &self.weights[..self.tap_count()]
    }

    pub fn weight(&self, tap: usize) -> S {
        debug_assert!(tap < self.tap_count());
        self.weights[tap]
    }

    /// Texel coordinate of tap `k`, row-major from the upper-left corner.
    pub fn tap_coord(&self, tap: usize) -> IVec2 {
        let e = self.extent as i32;
        self.upper_left + ivec2(tap as i32 % e, tap as i32 / e)
    }

    /// Tap index of a texel coordinate, or None when outside the footprint.
    pub fn tap_of_coord(&self, c: IVec2) -> Option<usize> {
        let d = c - self.upper_left;
        let e = self.extent as i32;
        if d.x >= 0 && d.x < e && d.y >= 0 && d.y < e {
            Some((d.y * e + d.x) as usize)
        } else {
            None
        }
    }

    /// Lower-right texel coordinate of the footprint (inclusive).
    pub fn lower_right(&self) -> IVec2 {
        let e = self.extent as i32;
        self.upper_left + ivec2(e - 1, e - 1)
    }

    /// The canonical weighted sum: taps in ascending row-major order,
    /// `acc += value * weight`. Exact collaborative paths reproduce this
    /// accumulation order bit for bit.
    pub fn filter<V: Sample<S>>(&self, mut fetch: impl FnMut(IVec2) -> V) -> V {
        let mut acc = V::default();
        for tap in 0..self.tap_count() {
            acc += fetch(self.tap_coord(tap)) * self.weights[tap];
        }
        acc
    }
}

/// Footprint of `kind` at texture coordinate `uv` in a `tex_dims` texture.
///
/// `upper_left` is `floor(uv * dims - 0.5)` for bilinear; the extent-4 kinds
/// shift it by -1 so the 4x4 grid is centered on the same sample point.
/// Coordinates may be out of bounds.
pub fn footprint<S: Real>(uv: [S; 2], tex_dims: IVec2, kind: FilterKind) -> FilterFootprint<S> {
    debug_assert!(tex_dims.x >= 2 && tex_dims.y >= 2);
    let fx = uv[0] * S::of(tex_dims.x as f64) - S::half();
    let fy = uv[1] * S::of(tex_dims.y as f64) - S::half();
    let ulx = fx.floor();
    let uly = fy.floor();
    let st = [fx - ulx, fy - uly];
    let ul_bilinear = ivec2(ulx.as_f64() as i32, uly.as_f64() as i32);

    let mut weights = [S::zero(); MAX_TAPS];
    let (upper_left, extent) = match kind {
        FilterKind::Bilinear => {
            weights[..4].copy_from_slice(&bilinear_weights(st));
            (ul_bilinear, 2)
        }
        FilterKind::BicubicBSpline => {
            weights.copy_from_slice(&tensor_product(bspline_weights_1d(st[0]), bspline_weights_1d(st[1])));
            (ul_bilinear + ivec2(-1, -1), 4)
        }
        FilterKind::CatmullRom => {
            weights.copy_from_slice(&tensor_product(
                catmull_rom_weights_1d(st[0]),
                catmull_rom_weights_1d(st[1]),
            ));
            (ul_bilinear + ivec2(-1, -1), 4)
        }
    };
    FilterFootprint {
        upper_left,
        extent,
        st,
        weights,
    }
}

/// Footprint corner coordinates only (upper-left, lower-right inclusive),
/// skipping the weight computation. Integer math is identical to
/// [`footprint`].
pub fn footprint_bounds<S: Real>(uv: [S; 2], tex_dims: IVec2, kind: FilterKind) -> (IVec2, IVec2) {
    let fx = uv[0] * S::of(tex_dims.x as f64) - S::half();
    let fy = uv[1] * S::of(tex_dims.y as f64) - S::half();
    let ul_bilinear = ivec2(fx.floor().as_f64() as i32, fy.floor().as_f64() as i32);
    match kind {
        FilterKind::Bilinear => (ul_bilinear, ul_bilinear + ivec2(1, 1)),
        _ => (ul_bilinear + ivec2(-1, -1), ul_bilinear + ivec2(2, 2)),
    }
}

/// Bilinear weights ordered (UL, UR, LL, LR).
pub fn bilinear_weights<S: Real>(st: [S; 2]) -> [S; 4] {
    let [s, t] = st;
    let one = S::one();
    [
        (one - s) * (one - t),
        s * (one - t),
        (one - s) * t,
        s * t,
    ]
}

/// 1-D uniform cubic B-spline weights at the four integer taps around a
/// sample with fractional position `s` in [0,1).
pub fn bspline_weights_1d<S: Real>(s: S) -> [S; 4] {
    let sixth = S::of(1.0 / 6.0);
    let one = S::one();
    let s2 = s * s;
    let s3 = s2 * s;
    let oms = one - s;
    [
        sixth * oms * oms * oms,
        sixth * (S::of(3.0) * s3 - S::of(6.0) * s2 + S::of(4.0)),
        sixth * (S::of(-3.0) * s3 + S::of(3.0) * s2 + S::of(3.0) * s + one),
        sixth * s3,
    ]
}

/// 1-D Catmull-Rom weights (tension 1/2). Factored so the node values are
/// exact: s = 0 gives (0, 1, 0, 0) bit for bit.
pub fn catmull_rom_weights_1d<S: Real>(s: S) -> [S; 4] {
    let half = S::half();
    let one = S::one();
    [
        half * s * (-one + s * (S::of(2.0) - s)),
        half * (S::of(2.0) + s * s * (S::of(-5.0) + S::of(3.0) * s)),
        half * s * (one + s * (S::of(4.0) - S::of(3.0) * s)),
        half * s * s * (s - one),
    ]
}

/// 16 weights, row-major: weight(x, y) = wx[x] * wy[y].
fn tensor_product<S: Real>(wx: [S; 4], wy: [S; 4]) -> [S; MAX_TAPS] {
    let mut w = [S::zero(); MAX_TAPS];
    for y in 0..4 {
        for x in 0..4 {
            w[y * 4 + x] = wx[x] * wy[y];
        }
    }
    w
}

/// Bicubic B-spline weights as a flat 4x4 row-major grid.
pub fn bicubic_bspline_weights<S: Real>(st: [S; 2]) -> [S; MAX_TAPS] {
    tensor_product(bspline_weights_1d(st[0]), bspline_weights_1d(st[1]))
}

/// Catmull-Rom weights as a flat 4x4 row-major grid.
pub fn catmull_rom_weights<S: Real>(st: [S; 2]) -> [S; MAX_TAPS] {
    tensor_product(catmull_rom_weights_1d(st[0]), catmull_rom_weights_1d(st[1]))
}
