//! Prior-art comparators: one-tap stochastic texture filtering (with the
//! positivized variant for signed filters) and a simplified
//! wave-communication STF.
//!
//! The wave-communication variant here is a reconstruction, not a
//! reproduction: it draws one-tap samples independently per lane and
//! combines gathered texels by renormalized weighting, without the original
//! work's blue-noise sample sets or stochastic sharing masks. Numbers
//! reported for it carry that caveat.

use crate::fallback::sample_tap;
use crate::filters::FilterFootprint;
use crate::geom::{IVec2, Sample};
use crate::rng::{draw, FrameRng};
use crate::scalar::Real;
use crate::wave::{LaneVec, Wave};

/// Classic one-tap STF: select texel i with probability w_i and return it.
/// Requires a nonnegative-weight filter; signed filters need
/// [`one_tap_stf_positivized`].
pub fn one_tap_stf<S: Real, V: Sample<S>>(
    fp: &FilterFootprint<S>,
    mut produce: impl FnMut(IVec2) -> V,
    u: f64,
) -> V {
    assert!(
        fp.weights().iter().all(|w| *w >= S::zero()),
        "one-tap STF requires nonnegative weights; use the positivized variant"
    );
    let tap = sample_tap(fp.weights(), u).expect("weights sum to one");
    produce(fp.tap_coord(tap))
}

/// Positivized one-tap STF for filters with negative lobes: sample the
/// positive and negative parts separately and combine as
/// `W+ * p(t+) - W- * p(t-)`. Costs two texel evaluations whenever the
/// negative lobe is nonempty.
pub fn one_tap_stf_positivized<S: Real, V: Sample<S>>(
    fp: &FilterFootprint<S>,
    mut produce: impl FnMut(IVec2) -> V,
    u_pos: f64,
    u_neg: f64,
) -> V {
    let mut w_pos = S::zero();
    let mut w_neg = S::zero();
    for w in fp.weights() {
        if *w >= S::zero() {
            w_pos += *w;
        } else {
            w_neg += -*w;
        }
    }

    let pos_weights: Vec<S> = fp.weights().iter().map(|w| w.max(S::zero())).collect();
    let tap_pos = sample_tap(&pos_weights, u_pos).expect("positive lobe is never empty");
    let mut value = produce(fp.tap_coord(tap_pos)) * w_pos;

    if w_neg > S::zero() {
        let neg_weights: Vec<S> = fp.weights().iter().map(|w| (-*w).max(S::zero())).collect();
        let tap_neg = sample_tap(&neg_weights, u_neg).expect("nonempty negative lobe");
        value += produce(fp.tap_coord(tap_neg)) * (-w_neg);
    }
    value
}

/// Simplified wave-communication STF: each lane draws its one-tap texel
/// independently, gathers the distinct produced texels inside its own
/// footprint and renormalizes: c = sum w_i p_i / sum w_i. Nonnegative
/// filters only.
pub fn wave_comm_stf<S: Real, V: Sample<S>>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
    mut produce: impl FnMut(IVec2) -> V,
    rng: &FrameRng,
    pixels: &LaneVec<IVec2>,
) -> LaneVec<V> {
    let mut coords = LaneVec::new();
    let mut values = LaneVec::new();
    for lane in wave.active_lanes() {
        let fp = footprints.get(lane);
        assert!(
            fp.weights().iter().all(|w| *w >= S::zero()),
            "wave-communication STF does not support filters with negative weights"
        );
        let u = rng.unit(pixels.get(lane), draw::PRIMARY);
        let tap = sample_tap(fp.weights(), u).expect("weights sum to one");
        let c = fp.tap_coord(tap);
        coords.set(lane, c);
        values.set(lane, produce(c));
    }

    let mut out = LaneVec::new();
    for lane in wave.active_lanes() {
        let fp = footprints.get(lane);
        let mut seen: Vec<IVec2> = Vec::with_capacity(fp.tap_count());
        let mut weighted = V::default();
        let mut weight_sum = S::zero();
        for src in wave.active_lanes() {
            let c = coords.get(src);
            if seen.contains(&c) {
                continue;
            }
            if let Some(tap) = fp.tap_of_coord(c) {
                seen.push(c);
                weighted += wave.read_lane_at(&values, src) * fp.weight(tap);
                weight_sum += fp.weight(tap);
            }
        }
        // The lane's own tap always lands in its footprint with positive
        // weight, so the normalizer is nonzero.
        out.set(lane, weighted * (S::one() / weight_sum));
    }
    out
}
