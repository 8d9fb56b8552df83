//! Fallback estimators for waves where exact collaborative filtering is
//! impossible: the basic variant (C) and the extended one (C+) that puts
//! idle lanes to work on extra texels.

use crate::ctf::{nth_active_lane, TexelMask256};
use crate::filters::FilterFootprint;
use crate::geom::{ivec2, IVec2, Sample};
use crate::rng::{draw, FrameRng};
use crate::scalar::Real;
use crate::wave::{LaneVec, Wave};

/// One stochastic texel selection: probability proportional to the absolute
/// filter weight of the texel within the lane's footprint.
#[derive(Debug, Clone, Copy)]
pub struct StfSample<S> {
    pub lane: u32,
    pub texel_coords: IVec2,
    pub selection_prob: S,
}

/// Draw a tap index with probability |w_i| / sum |w|. Zero-weight taps are
/// never selected. Returns None when every candidate weight is zero.
pub fn sample_tap<S: Real>(weights: &[S], u: f64) -> Option<usize> {
    sample_tap_filtered(weights, u, |_| true)
}

fn sample_tap_filtered<S: Real>(
    weights: &[S],
    u: f64,
    mut admit: impl FnMut(usize) -> bool,
) -> Option<usize> {
    debug_assert!((0.0..1.0).contains(&u));
    let mut total = 0.0f64;
    for (i, w) in weights.iter().enumerate() {
        if admit(i) {
            total += w.as_f64().abs();
        }
    }
    if total <= 0.0 {
        return None;
    }
    let target = u * total;
    let mut acc = 0.0f64;
    let mut last = None;
    for (i, w) in weights.iter().enumerate() {
        let aw = if admit(i) { w.as_f64().abs() } else { 0.0 };
        if aw > 0.0 {
            acc += aw;
            last = Some(i);
            if acc > target {
                return Some(i);
            }
        }
    }
    last
}

/// The lane's stochastic texel pick for this frame.
pub fn stf_select<S: Real>(
    lane: u32,
    fp: &FilterFootprint<S>,
    rng: &FrameRng,
    pixel: IVec2,
) -> StfSample<S> {
    let u = rng.unit(pixel, draw::PRIMARY);
    let tap = sample_tap(fp.weights(), u).expect("footprint weights sum to one");
    let total: S = fp.weights().iter().fold(S::zero(), |a, w| a + w.abs());
    StfSample {
        lane,
        texel_coords: fp.tap_coord(tap),
        selection_prob: fp.weight(tap).abs() / total,
    }
}

/// Estimate a lane's filtered value from `known` unique texels of its
/// footprint: the known texels enter with their signed filter weights and
/// the missing weight mass is covered by their unweighted average.
///
/// With a single known texel this returns it unchanged (the classic one-tap
/// result); with the whole footprint known the estimate is the exact filter
/// output.
pub fn combine_eq1<S: Real, V: Sample<S>>(known: &[(V, S)]) -> V {
    assert!(!known.is_empty(), "a lane always knows at least its own texel");
    if known.len() == 1 {
        return known[0].0;
    }
    let mut weighted = V::default();
    let mut weight_sum = S::zero();
    let mut plain_sum = V::default();
    for &(p, w) in known {
        weighted += p * w;
        weight_sum += w;
        plain_sum += p;
    }
    weighted + plain_sum * ((S::one() - weight_sum) / S::of(known.len() as f64))
}

/// Spread mapping for the extended fallback on a full 32-lane wave: the
/// remaining lane `c` in [n, 31] is assigned target lane
/// `round(31 (c - n) / (31 - n))`, with rounding half away from zero. Lanes
/// 0 and 31 are always covered when at least two lanes remain; a single
/// remaining lane maps to 0.
pub fn eq2_spread(c: u32, n: u32) -> u32 {
    assert!(n < 32, "no lanes remain when n = 32");
    assert!((n..32).contains(&c));
    spread_rank(c, n, 32)
}

/// Eq2-style spread over `lane_count` active slots; reduces to [`eq2_spread`]
/// at 32. Arguments are ranks within the active lanes.
fn spread_rank(c: u32, n: u32, lane_count: u32) -> u32 {
    let top = lane_count - 1;
    if top == n {
        return 0;
    }
    // round-half-up of top (c - n) / (top - n); all quantities nonnegative.
    (2 * top * (c - n) + (top - n)) / (2 * (top - n))
}

/// Basic fallback (C): every lane produces its own stochastic texel, then
/// gathers the distinct produced texels inside its footprint and combines
/// them with Eq-1 weighting.
pub fn fallback_c<S: Real, V: Sample<S>>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
    mut produce: impl FnMut(IVec2) -> V,
    rng: &FrameRng,
    pixels: &LaneVec<IVec2>,
) -> LaneVec<V> {
    let mut coords = LaneVec::new();
    let mut values = LaneVec::new();
    for lane in wave.active_lanes() {
        let pick = stf_select(lane, &footprints.get(lane), rng, pixels.get(lane));
        coords.set(lane, pick.texel_coords);
        values.set(lane, produce(pick.texel_coords));
    }
    gather_and_combine(wave, footprints, &coords, &values)
}

/// Extended fallback (C+): deduplicate the wave's planned stochastic texels
/// through a bitmask, let the first n active lanes produce them, and spread
/// the remaining lanes over the wave to produce extra not-yet-planned texels
/// before the Eq-1 combine.
pub fn fallback_c_plus<S: Real, V: Sample<S>>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
    mut produce: impl FnMut(IVec2) -> V,
    rng: &FrameRng,
    pixels: &LaneVec<IVec2>,
) -> LaneVec<V> {
    let active = wave.ballot();
    let lane_count = wave.active_count();

    // Phase 1: plan one stochastic texel per lane and deduplicate.
    let planned_picks = LaneVec::from_fn(active, |lane| {
        stf_select(lane, &footprints.get(lane), rng, pixels.get(lane)).texel_coords
    });
    let planned = unique_planned_texels(wave, &planned_picks);
    let n = planned.len() as u32;
    debug_assert!(n >= 1 && n <= lane_count);

    // Phase 2: producer role i runs on the i-th active lane (identity when
    // the low lanes are all active) and produces planned texel i.
    let contiguous = wave.lanes_lower_than_count_active(n);
    let role_lane = |role: u32| {
        if contiguous {
            role
        } else {
            nth_active_lane(active, role)
        }
    };
    let mut coords = LaneVec::new();
    let mut values = LaneVec::new();
    for role in 0..n {
        let c = planned[role as usize];
        let lane = role_lane(role);
        coords.set(lane, c);
        values.set(lane, produce(c));
    }

    // Phase 3: each remaining lane selects an unplanned texel from the
    // footprint of a lane spread evenly across the wave, |w|-weighted over
    // what is left. A fully planned footprint yields nothing.
    for rank in n..lane_count {
        let exec_lane = nth_active_lane(active, rank);
        let target_lane = nth_active_lane(active, spread_rank(rank, n, lane_count));
        let fp = footprints.get(target_lane);
        let u = rng.unit(pixels.get(exec_lane), draw::SECONDARY);
        let tap = sample_tap_filtered(fp.weights(), u, |tap| {
            !planned.contains(&fp.tap_coord(tap))
        });
        if let Some(tap) = tap {
            let c = fp.tap_coord(tap);
            coords.set(exec_lane, c);
            values.set(exec_lane, produce(c));
        }
    }

    gather_and_combine(wave, footprints, &coords, &values)
}

/// The wave's planned texels, deduplicated and enumerated in ascending
/// row-major order. Uses the 16x16 bitmask whenever the planned AABB fits
/// (one set bit per lane, OR across the wave, then set-bit enumeration);
/// falls back to a sorted coordinate list with the same ordering otherwise.
fn unique_planned_texels(wave: &Wave, picks: &LaneVec<IVec2>) -> Vec<IVec2> {
    let ul = wave.active_reduce(picks, |a, b| a.min(b));
    let lr = wave.active_reduce(picks, |a, b| a.max(b));
    let size = lr - ul;
    if size.x < 16 && size.y < 16 {
        let lane_masks = LaneVec::from_fn(wave.ballot(), |lane| {
            let d = picks.get(lane) - ul;
            let mut m = TexelMask256::new();
            m.set(d.y as u32 * 16 + d.x as u32);
            m
        });
        let merged = wave.active_bit_or(&lane_masks);
        (0..merged.popcount())
            .map(|i| {
                let t = merged.select(i);
                ul + ivec2((t % 16) as i32, (t / 16) as i32)
            })
            .collect()
    } else {
        let mut coords: Vec<IVec2> = wave.active_lanes().map(|l| picks.get(l)).collect();
        coords.sort();
        coords.dedup();
        coords
    }
}

/// Per-lane Eq-1 combination over the distinct produced texels that fall
/// inside the lane's own footprint. Lanes that produced nothing simply do
/// not contribute.
fn gather_and_combine<S: Real, V: Sample<S>>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
    coords: &LaneVec<IVec2>,
    values: &LaneVec<V>,
) -> LaneVec<V> {
    let mut out = LaneVec::new();
    for lane in wave.active_lanes() {
        let fp = footprints.get(lane);
        let mut known: Vec<(V, S)> = Vec::with_capacity(fp.tap_count());
        let mut seen: Vec<IVec2> = Vec::with_capacity(fp.tap_count());
        for src in wave.active_lanes() {
            if !coords.is_written(src) {
                continue;
            }
            let c = coords.get(src);
            if seen.contains(&c) {
                continue;
            }
            if let Some(tap) = fp.tap_of_coord(c) {
                seen.push(c);
                known.push((wave.read_lane_at(values, src), fp.weight(tap)));
            }
        }
        out.set(lane, combine_eq1(&known));
    }
    out
}
