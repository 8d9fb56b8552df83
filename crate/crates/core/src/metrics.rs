//! Image quality metrics over linear RGB float images, computed before any
//! quantization so zero-error assertions stay exact.

use crate::geom::Rgba;
use crate::scalar::Real;

/// Mean squared error over pixels and RGB channels (alpha excluded).
/// Accumulates in f64 regardless of the image scalar type.
pub fn mse<S: Real>(reference: &[Rgba<S>], test: &[Rgba<S>]) -> f64 {
    assert_eq!(reference.len(), test.len());
    assert!(!reference.is_empty());
    let mut acc = 0.0f64;
    for (g, t) in reference.iter().zip(test) {
        let dr = g.r.as_f64() - t.r.as_f64();
        let dg = g.g.as_f64() - t.g.as_f64();
        let db = g.b.as_f64() - t.b.as_f64();
        acc += dr * dr + dg * dg + db * db;
    }
    acc / (reference.len() * 3) as f64
}

/// PSNR of a single image pair: -10 log10(MSE), +inf for identical images.
pub fn psnr_single<S: Real>(reference: &[Rgba<S>], test: &[Rgba<S>]) -> f64 {
    psnr_from_mse(mse(reference, test))
}

pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse <= 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10()
    }
}

/// Aggregate PSNR over frame sequences: average the per-frame MSEs first,
/// then convert. Degenerates to [`psnr_single`] for one frame.
pub fn psnr_aggregate(frame_mses: &[f64]) -> f64 {
    assert!(!frame_mses.is_empty());
    let mean = frame_mses.iter().sum::<f64>() / frame_mses.len() as f64;
    psnr_from_mse(mean)
}

/// Maximum absolute channel difference scaled to [0, 255] (RGB only).
pub fn max_error_255<S: Real>(reference: &[Rgba<S>], test: &[Rgba<S>]) -> f64 {
    assert_eq!(reference.len(), test.len());
    let mut m = 0.0f64;
    for (g, t) in reference.iter().zip(test) {
        for c in 0..3 {
            m = m.max((g.channel(c).as_f64() - t.channel(c).as_f64()).abs());
        }
    }
    m * 255.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn img(vals: &[f64]) -> Vec<Rgba<f64>> {
        vals.iter().map(|&v| Rgba::splat(v)).collect()
    }

    #[test]
    fn identical_images_have_zero_error() {
        let a = img(&[0.1, 0.5, 0.9]);
        assert_eq!(mse(&a, &a), 0.0);
        assert_eq!(psnr_single(&a, &a), f64::INFINITY);
        assert_eq!(max_error_255(&a, &a), 0.0);
    }

    #[test]
    fn unit_difference_gives_unit_mse() {
        let g = img(&[0.0; 16]);
        let t = img(&[1.0; 16]);
        assert_eq!(mse(&g, &t), 1.0);
        assert_eq!(psnr_single(&g, &t), 0.0);
        assert_eq!(max_error_255(&g, &t), 255.0);
    }

    #[test]
    fn psnr_arithmetic() {
        assert!((psnr_from_mse(1e-4) - 40.0).abs() < 1e-12);
        // Two frames with MSEs 1e-4 and 1e-2 average to 5.05e-3.
        let agg = psnr_aggregate(&[1e-4, 1e-2]);
        assert!((agg - (-10.0 * 5.05e-3f64.log10())).abs() < 1e-12);
        assert_eq!(psnr_aggregate(&[1e-4]), psnr_from_mse(1e-4));
    }

    #[test]
    fn single_texel_delta_scales_to_255() {
        let g = img(&[0.0; 4]);
        let mut t = img(&[0.0; 4]);
        t[2].g = 1.0 / 255.0;
        assert!((max_error_255(&g, &t) - 1.0).abs() < 1e-12);
    }

    proptest! {
        // Direct double-precision loop oracle.
        #[test]
        fn mse_matches_scalar_oracle(a in prop::collection::vec(0.0f64..1.0, 12), b in prop::collection::vec(0.0f64..1.0, 12)) {
            let g: Vec<Rgba<f64>> = a.chunks(3).map(|c| Rgba::new(c[0], c[1], c[2], 1.0)).collect();
            let t: Vec<Rgba<f64>> = b.chunks(3).map(|c| Rgba::new(c[0], c[1], c[2], 1.0)).collect();
            let mut expect = 0.0;
            for (x, y) in a.iter().zip(&b) {
                expect += (x - y) * (x - y);
            }
            expect /= a.len() as f64;
            prop_assert!((mse(&g, &t) - expect).abs() < 1e-15);

            let mut maxe = 0.0f64;
            for (x, y) in a.iter().zip(&b) {
                maxe = maxe.max((x - y).abs() * 255.0);
            }
            prop_assert!((max_error_255(&g, &t) - maxe).abs() < 1e-12);
        }

        // Aggregate PSNR is bracketed by the best and worst frame.
        #[test]
        fn aggregate_is_bracketed(mses in prop::collection::vec(1e-8f64..1.0, 1..20)) {
            let agg = psnr_aggregate(&mses);
            let lo = mses.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = mses.iter().cloned().fold(0.0f64, f64::max);
            prop_assert!(agg <= psnr_from_mse(lo) + 1e-9);
            prop_assert!(agg >= psnr_from_mse(hi) - 1e-9);
        }
    }
}
