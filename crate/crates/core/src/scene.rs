//! The rotated-quad test scene: a textured quad viewed head-on, with the
//! camera distance expressed as a uniform magnification factor and rotation
//! around the view axis. Shading is Lambertian from diffuse and normal maps.

use crate::geom::{IVec2, Rgba, Sample};
use crate::scalar::Real;
use crate::texture::Texture;

/// Which pixels of the frame the quad's surface shader runs on. Anything
/// other than `Full` leaves some lanes inactive, exercising partially
/// active waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coverage {
    Full,
    /// Pixels within `radius` (in pixels) of the image center.
    Circle { radius: f64 },
    /// Pixels on the negative side of a line through the image center with
    /// normal direction `angle_deg`.
    HalfPlane { angle_deg: f64 },
}

impl Coverage {
    pub fn covers(&self, pixel: IVec2, resolution: (u32, u32)) -> bool {
        let cx = resolution.0 as f64 * 0.5;
        let cy = resolution.1 as f64 * 0.5;
        let dx = pixel.x as f64 + 0.5 - cx;
        let dy = pixel.y as f64 + 0.5 - cy;
        match self {
            Coverage::Full => true,
            Coverage::Circle { radius } => dx * dx + dy * dy <= radius * radius,
            Coverage::HalfPlane { angle_deg } => {
                let (s, c) = angle_deg.to_radians().sin_cos();
                dx * c + dy * s <= 0.0
            }
        }
    }
}

/// A textured quad filling the view, rotated in the screen plane. Textures
/// are shared, so deriving per-rotation scenes from one texture set is
/// cheap.
#[derive(Debug, Clone)]
pub struct QuadScene<S> {
    /// Rotation of the texel grid against the pixel grid, degrees in [0,90].
    pub rotation_deg: f64,
    /// Screen pixels per texel along the worst-stretch axis (> 0).
    pub magnification: f64,
    pub diffuse: std::sync::Arc<Texture<S>>,
    pub normal: std::sync::Arc<Texture<S>>,
    /// Unit vector toward the light.
    pub light_dir: [f64; 3],
}

impl<S: Real> QuadScene<S> {
    pub fn new(
        rotation_deg: f64,
        magnification: f64,
        diffuse: Texture<S>,
        normal: Texture<S>,
        light_dir: [f64; 3],
    ) -> Self {
        QuadScene::with_shared(
            rotation_deg,
            magnification,
            std::sync::Arc::new(diffuse),
            std::sync::Arc::new(normal),
            light_dir,
        )
    }

    pub fn with_shared(
        rotation_deg: f64,
        magnification: f64,
        diffuse: std::sync::Arc<Texture<S>>,
        normal: std::sync::Arc<Texture<S>>,
        light_dir: [f64; 3],
    ) -> Self {
        assert!(magnification > 0.0);
        assert_eq!(
            diffuse.dims(),
            normal.dims(),
            "diffuse and normal maps must share dimensions"
        );
        let len = (light_dir[0] * light_dir[0]
            + light_dir[1] * light_dir[1]
            + light_dir[2] * light_dir[2])
            .sqrt();
        assert!(len > 0.0);
        QuadScene {
            rotation_deg,
            magnification,
            diffuse,
            normal,
            light_dir: [light_dir[0] / len, light_dir[1] / len, light_dir[2] / len],
        }
    }

    /// The same scene at a different rotation and magnification, sharing
    /// textures.
    pub fn reoriented(&self, rotation_deg: f64, magnification: f64) -> Self {
        let mut s = self.clone();
        s.rotation_deg = rotation_deg;
        s.magnification = magnification;
        s
    }

    /// Default procedural scene: noise diffuse, bumpy normal map.
    pub fn procedural(rotation_deg: f64, magnification: f64, tex_size: i32, seed: u64) -> Self {
        let dims = crate::geom::ivec2(tex_size, tex_size);
        QuadScene::new(
            rotation_deg,
            magnification,
            Texture::value_noise(dims, seed),
            Texture::noise_normal_map(dims, seed.wrapping_add(0x9E37)),
            [0.35, -0.25, 0.9],
        )
    }

    /// Reciprocal of the largest texel-space step produced by a unit pixel
    /// step: the magnification factor. The pixel-to-texel map is affine, so
    /// this is uniform across the frame.
    pub fn magnification_factor(&self) -> f64 {
        let (s, c) = self.rotation_deg.to_radians().sin_cos();
        let col_x = ((c / self.magnification).powi(2) + (s / self.magnification).powi(2)).sqrt();
        let col_y = ((s / self.magnification).powi(2) + (c / self.magnification).powi(2)).sqrt();
        1.0 / col_x.max(col_y)
    }
}

/// Precomputed affine pixel-center to uv map for one frame.
#[derive(Debug, Clone, Copy)]
pub struct PixelMap {
    cos_t: f64,
    sin_t: f64,
    inv_mag: f64,
    center: [f64; 2],
    inv_dims: [f64; 2],
}

impl PixelMap {
    pub fn new<S: Real>(scene: &QuadScene<S>, resolution: (u32, u32)) -> Self {
        let (s, c) = scene.rotation_deg.to_radians().sin_cos();
        let dims = scene.diffuse.dims();
        PixelMap {
            cos_t: c,
            sin_t: s,
            inv_mag: 1.0 / scene.magnification,
            center: [resolution.0 as f64 * 0.5, resolution.1 as f64 * 0.5],
            inv_dims: [1.0 / dims.x as f64, 1.0 / dims.y as f64],
        }
    }

    /// uv of a pixel center: rotate the centered pixel offset back into the
    /// texture frame, scale by magnification and texture size, and recenter
    /// on (0.5, 0.5).
    pub fn uv(&self, pixel: IVec2) -> [f64; 2] {
        let dx = (pixel.x as f64 + 0.5 - self.center[0]) * self.inv_mag;
        let dy = (pixel.y as f64 + 0.5 - self.center[1]) * self.inv_mag;
        let tx = self.cos_t * dx + self.sin_t * dy;
        let ty = -self.sin_t * dx + self.cos_t * dy;
        [tx * self.inv_dims[0] + 0.5, ty * self.inv_dims[1] + 0.5]
    }
}

/// uv and coverage of one pixel.
pub fn pixel_uv<S: Real>(
    pixel: IVec2,
    scene: &QuadScene<S>,
    resolution: (u32, u32),
    coverage: &Coverage,
) -> ([f64; 2], bool) {
    (
        PixelMap::new(scene, resolution).uv(pixel),
        coverage.covers(pixel, resolution),
    )
}

/// One produced texel of the quad's material: both maps sampled at the same
/// coordinate. Counts as a single texel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MaterialSample<S> {
    pub diffuse: Rgba<S>,
    pub normal: Rgba<S>,
}

impl<S: Real> std::ops::Add for MaterialSample<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        MaterialSample {
            diffuse: self.diffuse + o.diffuse,
            normal: self.normal + o.normal,
        }
    }
}

impl<S: Real> std::ops::AddAssign for MaterialSample<S> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<S: Real> std::ops::Mul<S> for MaterialSample<S> {
    type Output = Self;
    fn mul(self, k: S) -> Self {
        MaterialSample {
            diffuse: self.diffuse * k,
            normal: self.normal * k,
        }
    }
}

// MaterialSample satisfies the Sample bound through the blanket impl.
const _: fn() = || {
    fn assert_sample<S: Real, V: Sample<S>>() {}
    let _ = assert_sample::<f32, MaterialSample<f32>>;
};

/// Lambertian shading: decode the normal from [0,1]^3 to [-1,1]^3,
/// normalize, and scale the diffuse color by max(0, n.l). Alpha passes
/// through.
pub fn shade<S: Real>(diffuse: Rgba<S>, normal: Rgba<S>, light_dir: [f64; 3]) -> Rgba<S> {
    let two = S::of(2.0);
    let one = S::one();
    let mut n = [
        normal.r * two - one,
        normal.g * two - one,
        normal.b * two - one,
    ];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if len > S::zero() {
        n = [n[0] / len, n[1] / len, n[2] / len];
    } else {
        n = [S::zero(), S::zero(), S::one()];
    }
    let l = [S::of(light_dir[0]), S::of(light_dir[1]), S::of(light_dir[2])];
    let lambert = (n[0] * l[0] + n[1] * l[1] + n[2] * l[2]).max(S::zero());
    Rgba::new(
        diffuse.r * lambert,
        diffuse.g * lambert,
        diffuse.b * lambert,
        diffuse.a,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ivec2;

    fn test_scene(rotation: f64, mag: f64) -> QuadScene<f64> {
        QuadScene::procedural(rotation, mag, 256, 7)
    }

    #[test]
    fn center_pixel_maps_to_uv_center() {
        let scene = test_scene(33.0, 2.0);
        let res = (512u32, 512u32);
        // The exact center lies between pixels; probe symmetrically.
        let map = PixelMap::new(&scene, res);
        let a = map.uv(ivec2(255, 255));
        let b = map.uv(ivec2(256, 256));
        assert!((a[0] + b[0] - 1.0).abs() < 1e-12);
        assert!((a[1] + b[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_magnification_gives_one_texel_per_pixel() {
        let scene = test_scene(0.0, 1.0);
        let map = PixelMap::new(&scene, (64, 64));
        let a = map.uv(ivec2(10, 20));
        let b = map.uv(ivec2(11, 20));
        let dims = scene.diffuse.dims();
        assert!(((b[0] - a[0]) * dims.x as f64 - 1.0).abs() < 1e-12);
        assert!(((b[1] - a[1]) * dims.y as f64).abs() < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        // Finite-difference oracle for the analytic magnification factor.
        for (rot, mag) in [(0.0, 1.0), (30.0, 1.6), (45.0, 2.35), (77.0, 3.3)] {
            let scene = test_scene(rot, mag);
            let dims = scene.diffuse.dims();
            let map = PixelMap::new(&scene, (512, 512));
            let p = ivec2(100, 200);
            let base = map.uv(p);
            let px = map.uv(p + ivec2(1, 0));
            let py = map.uv(p + ivec2(0, 1));
            let col = |a: [f64; 2], b: [f64; 2]| {
                let tx = (a[0] - b[0]) * dims.x as f64;
                let ty = (a[1] - b[1]) * dims.y as f64;
                (tx * tx + ty * ty).sqrt()
            };
            let max_step = col(px, base).max(col(py, base));
            assert!((1.0 / max_step - scene.magnification_factor()).abs() < 1e-9);
            assert!((scene.magnification_factor() - mag).abs() < 1e-9);
        }
    }

    #[test]
    fn coverage_predicates() {
        let res = (64u32, 64u32);
        assert!(Coverage::Full.covers(ivec2(0, 0), res));
        let circle = Coverage::Circle { radius: 10.0 };
        assert!(circle.covers(ivec2(32, 32), res));
        assert!(!circle.covers(ivec2(0, 0), res));
        let hp = Coverage::HalfPlane { angle_deg: 0.0 };
        assert!(hp.covers(ivec2(0, 32), res));
        assert!(!hp.covers(ivec2(63, 32), res));
    }

    #[test]
    fn shade_aligned_normal_returns_diffuse() {
        let d = Rgba::new(0.3f64, 0.5, 0.7, 0.9);
        let l = [0.0, 0.0, 1.0];
        // Encoded normal pointing straight at the light.
        let n = Rgba::new(0.5, 0.5, 1.0, 1.0);
        let out = shade(d, n, l);
        assert!(out.max_abs_diff(&d) < 1e-12);
    }

    #[test]
    fn shade_perpendicular_normal_is_black() {
        let d = Rgba::new(0.3f64, 0.5, 0.7, 1.0);
        let l = [0.0, 0.0, 1.0];
        let n = Rgba::new(1.0, 0.5, 0.5, 1.0); // +x normal
        let out = shade(d, n, l);
        assert_eq!(out.r, 0.0);
        assert_eq!(out.g, 0.0);
        assert_eq!(out.b, 0.0);
        assert_eq!(out.a, 1.0);
    }

    #[test]
    fn shade_matches_scalar_oracle() {
        let d = Rgba::new(0.8f64, 0.4, 0.2, 1.0);
        let n_enc = Rgba::new(0.7, 0.3, 0.9, 1.0);
        let l = [0.35f64, -0.25, 0.9];
        let ll = (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]).sqrt();
        let l = [l[0] / ll, l[1] / ll, l[2] / ll];
        let out = shade(d, n_enc, l);

        let n = [0.7f64 * 2.0 - 1.0, 0.3 * 2.0 - 1.0, 0.9 * 2.0 - 1.0];
        let nl = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let lam = ((n[0] * l[0] + n[1] * l[1] + n[2] * l[2]) / nl).max(0.0);
        assert!((out.r - 0.8 * lam).abs() < 1e-12);
        assert!((out.g - 0.4 * lam).abs() < 1e-12);
        assert!((out.b - 0.2 * lam).abs() < 1e-12);
    }
}
