//! CPU lockstep simulator of GPU-wave collaborative texture filtering.
//!
//! Emulates a 32-lane wave and its intrinsics, implements the three
//! collaborative filtering algorithms (List Building, Box Sampling, Mask
//! Sampling) with their stochastic fallbacks and prior-art baselines, and
//! renders a rotated-quad test scene to measure zero-error thresholds,
//! texel-count bounds and quality curves.
//!
//! Filtering math is generic over the scalar type: `f32` is the rendering
//! default, `f64` doubles as the reference oracle in tests.

pub mod baselines;
pub mod ctf;
pub mod dct;
pub mod fallback;
pub mod filters;
pub mod geom;
pub mod io;
pub mod metrics;
pub mod render;
pub mod rng;
pub mod scalar;
pub mod scene;
pub mod texture;
pub mod wave;

pub use scalar::Real;

/// Concrete aliases for the rendering scalar.
pub type Rgba32 = geom::Rgba<f32>;
pub type Texture32 = texture::Texture<f32>;
pub type Footprint32 = filters::FilterFootprint<f32>;
pub type Scene32 = scene::QuadScene<f32>;
pub type Image32 = render::Image<f32>;

/// Double-precision aliases used by reference oracles.
pub type Rgba64 = geom::Rgba<f64>;
pub type Texture64 = texture::Texture<f64>;
pub type Scene64 = scene::QuadScene<f64>;
