//! Collaborative texture filtering: List Building, Box Sampling and Mask
//! Sampling, plus the set-bit bijection and edge remapping they rely on.
//!
//! All three share the same flow: the wave collects which texels it needs,
//! each lane produces at most one of them, and every lane gathers its
//! footprint texels from across the wave and applies the filter weights in
//! the canonical order. Whenever an algorithm returns per-lane colors they
//! match a direct reference evaluation bit for bit.

use std::ops::BitOr;

use crate::filters::FilterFootprint;
use crate::geom::{ivec2, IVec2, Sample};
use crate::scalar::Real;
use crate::wave::{LaneMask, LaneVec, Wave};

/// Bit grid over the wave's texel AABB. Storage is always 256 bits; the
/// grid width used for index arithmetic is a parameter (16 by default, 11
/// for the compact bilinear variant).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TexelMask256 {
    words: [u64; 4],
}

impl TexelMask256 {
    pub const BITS: u32 = 256;

    pub fn new() -> Self {
        TexelMask256::default()
    }

    pub fn set(&mut self, bit: u32) {
        debug_assert!(bit < Self::BITS);
        self.words[(bit / 64) as usize] |= 1u64 << (bit % 64);
    }

    pub fn test(&self, bit: u32) -> bool {
        self.words[(bit / 64) as usize] & (1u64 << (bit % 64)) != 0
    }

    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Set the `extent`x`extent` block of bits whose upper-left local
    /// coordinate is `local`, on a grid `grid_width` bits wide.
    pub fn set_block(&mut self, local: IVec2, extent: u32, grid_width: u32) {
        debug_assert!(local.x >= 0 && local.y >= 0);
        for dy in 0..extent as i32 {
            for dx in 0..extent as i32 {
                self.set(((local.y + dy) as u32) * grid_width + (local.x + dx) as u32);
            }
        }
    }

    /// Position of the i-th set bit, counting from the least significant.
    /// `i` must be below the popcount; anything else is a caller bug.
    pub fn select(&self, mut i: u32) -> u32 {
        for (w, word) in self.words.iter().enumerate() {
            let cnt = word.count_ones();
            if i < cnt {
                return w as u32 * 64 + select_in_u64(*word, i);
            }
            i -= cnt;
        }
        panic!("select index out of range");
    }

    /// Number of set bits strictly below bit `t`: the inverse of `select`
    /// for set bits.
    pub fn rank(&self, t: u32) -> u32 {
        debug_assert!(t < Self::BITS);
        let w = (t / 64) as usize;
        let below: u32 = self.words[..w].iter().map(|x| x.count_ones()).sum();
        let mask = (1u64 << (t % 64)) - 1;
        below + (self.words[w] & mask).count_ones()
    }
}

impl BitOr for TexelMask256 {
    type Output = TexelMask256;
    fn bitor(self, o: TexelMask256) -> TexelMask256 {
        TexelMask256 {
            words: [
                self.words[0] | o.words[0],
                self.words[1] | o.words[1],
                self.words[2] | o.words[2],
                self.words[3] | o.words[3],
            ],
        }
    }
}

/// Position of the i-th set bit of `word` (i < popcount).
pub fn select_in_u64(word: u64, i: u32) -> u32 {
    debug_assert!(i < word.count_ones());
    let mut remaining = i;
    let mut base = 0u32;
    let mut w = word;
    // Skip whole bytes by popcount, then walk the final byte.
    loop {
        let cnt = (w & 0xFF).count_ones();
        if remaining < cnt {
            break;
        }
        remaining -= cnt;
        base += 8;
        w >>= 8;
    }
    let mut byte = w & 0xFF;
    for _ in 0..remaining {
        byte &= byte - 1;
    }
    base + byte.trailing_zeros()
}

/// The i-th active lane of `mask`: the edge-remapping map from producer
/// role to lane at partially active waves.
pub fn nth_active_lane(mask: LaneMask, i: u32) -> u32 {
    select_in_u64(mask as u64, i)
}

/// Map a producer lane index to texel coordinates inside the wave AABB.
pub fn lane_idx_to_coord(lane_idx: u32, wave_upper_left: IVec2, bb_width: u32) -> IVec2 {
    wave_upper_left + ivec2((lane_idx % bb_width) as i32, (lane_idx / bb_width) as i32)
}

/// Inverse of [`lane_idx_to_coord`].
pub fn coord_to_lane_idx(coord: IVec2, wave_upper_left: IVec2, bb_width: u32) -> u32 {
    let d = coord - wave_upper_left;
    debug_assert!(d.x >= 0 && d.y >= 0 && (d.x as u32) < bb_width);
    d.x as u32 + d.y as u32 * bb_width
}

/// Why a wave could not be filtered exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackReason {
    /// Box: AABB area exceeds the number of active lanes.
    AabbTooLarge,
    /// Mask/List: more unique texels than active lanes.
    TooManyTexels,
    /// Producer roles could not be assigned (edge remapping disabled).
    LanesNotContiguous,
    /// Mask: AABB does not fit the bit grid.
    MaskTooLarge,
}

/// Result of one collaborative filtering attempt for a wave.
#[derive(Debug, Clone)]
pub enum CtfOutcome<V> {
    /// Every active lane received all of its footprint texels; values are
    /// exact.
    PerLaneColor(LaneVec<V>),
    FallbackNeeded(FallbackReason),
}

impl<V> CtfOutcome<V> {
    pub fn is_exact(&self) -> bool {
        matches!(self, CtfOutcome::PerLaneColor(_))
    }
}

/// How producer roles map onto lanes.
#[derive(Debug, Clone, Copy)]
enum RoleMap {
    /// Lanes 0..n-1 are all active: role i runs on lane i.
    Contiguous,
    /// Role i runs on the i-th active lane.
    Remapped(LaneMask),
}

impl RoleMap {
    fn lane(&self, role: u32) -> u32 {
        match self {
            RoleMap::Contiguous => role,
            RoleMap::Remapped(mask) => nth_active_lane(*mask, role),
        }
    }
}

fn assign_roles(wave: &Wave, needed: u32, edge_remap: bool) -> Result<RoleMap, FallbackReason> {
    debug_assert!(needed <= wave.active_count());
    if wave.lanes_lower_than_count_active(needed) {
        Ok(RoleMap::Contiguous)
    } else if edge_remap {
        Ok(RoleMap::Remapped(wave.ballot()))
    } else {
        Err(FallbackReason::LanesNotContiguous)
    }
}

/// AABB over the active lanes' footprints: (upper-left, size).
pub fn wave_footprint_aabb<S: Real>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
) -> (IVec2, IVec2) {
    let uls = LaneVec::from_fn(wave.ballot(), |l| footprints.get(l).upper_left);
    let lrs = LaneVec::from_fn(wave.ballot(), |l| footprints.get(l).lower_right());
    let ul = wave.active_min(&uls);
    let lr = wave.active_max(&lrs);
    (ul, lr - ul + ivec2(1, 1))
}

/// Box Sampling: bound the wave's texels with an AABB and hand each cell to
/// one lane through a modulo/divide bijection. Fast and conservative.
pub fn box_sampling<S: Real, V: Sample<S>>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
    mut produce: impl FnMut(IVec2) -> V,
    edge_remap: bool,
) -> CtfOutcome<V> {
    let (ul, bb) = wave_footprint_aabb(wave, footprints);
    let area = (bb.x * bb.y) as u32;
    if area > wave.active_count() {
        return CtfOutcome::FallbackNeeded(FallbackReason::AabbTooLarge);
    }
    let roles = match assign_roles(wave, area, edge_remap) {
        Ok(r) => r,
        Err(reason) => return CtfOutcome::FallbackNeeded(reason),
    };

    let mut produced = LaneVec::new();
    for role in 0..area {
        let coord = lane_idx_to_coord(role, ul, bb.x as u32);
        produced.set(roles.lane(role), produce(coord));
    }

    let mut out = LaneVec::new();
    for lane in wave.active_lanes() {
        let color = footprints.get(lane).filter(|c| {
            let role = coord_to_lane_idx(c, ul, bb.x as u32);
            wave.read_lane_at(&produced, roles.lane(role))
        });
        out.set(lane, color);
    }
    CtfOutcome::PerLaneColor(out)
}

/// Mask Sampling: encode exactly which texels the wave needs in a bit grid
/// over the AABB, produce the i-th set bit on lane i, and gather through the
/// rank query. Succeeds strictly more often than Box Sampling.
pub fn mask_sampling<S: Real, V: Sample<S>>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
    mut produce: impl FnMut(IVec2) -> V,
    mask_width: u32,
    edge_remap: bool,
) -> CtfOutcome<V> {
    debug_assert!(mask_width * mask_width <= TexelMask256::BITS);
    let (ul, bb) = wave_footprint_aabb(wave, footprints);
    if bb.x as u32 > mask_width || bb.y as u32 > mask_width {
        return CtfOutcome::FallbackNeeded(FallbackReason::MaskTooLarge);
    }

    let lane_masks = LaneVec::from_fn(wave.ballot(), |l| {
        let fp = footprints.get(l);
        let mut m = TexelMask256::new();
        m.set_block(fp.upper_left - ul, fp.extent, mask_width);
        m
    });
    let wave_mask = wave.active_bit_or(&lane_masks);
    let needed = wave_mask.popcount();
    if needed > wave.active_count() {
        return CtfOutcome::FallbackNeeded(FallbackReason::TooManyTexels);
    }
    let roles = match assign_roles(wave, needed, edge_remap) {
        Ok(r) => r,
        Err(reason) => return CtfOutcome::FallbackNeeded(reason),
    };

    let mut produced = LaneVec::new();
    for role in 0..needed {
        let t = wave_mask.select(role);
        let coord = ul + ivec2((t % mask_width) as i32, (t / mask_width) as i32);
        produced.set(roles.lane(role), produce(coord));
    }

    let mut out = LaneVec::new();
    for lane in wave.active_lanes() {
        let color = footprints.get(lane).filter(|c| {
            let d = c - ul;
            let t = d.y as u32 * mask_width + d.x as u32;
            let role = wave_mask.rank(t);
            wave.read_lane_at(&produced, roles.lane(role))
        });
        out.set(lane, color);
    }
    CtfOutcome::PerLaneColor(out)
}

/// List Building: hierarchically merge per-lane texel lists (simulated
/// shared memory) into one duplicate-free list. The most expensive variant;
/// its success predicate (unique texels <= active lanes) is the upper bound
/// the other two approximate.
pub fn list_building<S: Real, V: Sample<S>>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
    mut produce: impl FnMut(IVec2) -> V,
    edge_remap: bool,
) -> CtfOutcome<V> {
    let unique = unique_texel_list(wave, footprints);
    let needed = unique.len() as u32;
    if needed > wave.active_count() {
        return CtfOutcome::FallbackNeeded(FallbackReason::TooManyTexels);
    }
    let roles = match assign_roles(wave, needed, edge_remap) {
        Ok(r) => r,
        Err(reason) => return CtfOutcome::FallbackNeeded(reason),
    };

    let mut produced = LaneVec::new();
    for role in 0..needed {
        produced.set(roles.lane(role), produce(unique[role as usize]));
    }

    let mut out = LaneVec::new();
    for lane in wave.active_lanes() {
        let color = footprints.get(lane).filter(|c| {
            let role = unique
                .iter()
                .position(|&u| u == c)
                .expect("footprint texel missing from merged list") as u32;
            wave.read_lane_at(&produced, roles.lane(role))
        });
        out.set(lane, color);
    }
    CtfOutcome::PerLaneColor(out)
}

/// The merged duplicate-free texel list for a wave: a pairwise hierarchical
/// merge over lane lists, log2(lanes) levels deep.
pub fn unique_texel_list<S: Real>(
    wave: &Wave,
    footprints: &LaneVec<FilterFootprint<S>>,
) -> Vec<IVec2> {
    let lanes = wave.lane_count() as usize;
    // Simulated shared memory: one list slot per lane.
    let mut slots: Vec<Vec<IVec2>> = (0..lanes)
        .map(|l| {
            let l = l as u32;
            if wave.is_active(l) {
                let fp = footprints.get(l);
                (0..fp.tap_count()).map(|t| fp.tap_coord(t)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();

    let mut stride = 1;
    while stride < lanes {
        let mut i = 0;
        while i + stride < lanes {
            let right = std::mem::take(&mut slots[i + stride]);
            let left = &mut slots[i];
            for c in right {
                if !left.contains(&c) {
                    left.push(c);
                }
            }
            i += 2 * stride;
        }
        stride *= 2;
    }
    slots.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{footprint, FilterKind};
    use crate::geom::Rgba;
    use crate::texture::{ground_truth_filter, Texture};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn mask_from_bits(bits: &[u32]) -> TexelMask256 {
        let mut m = TexelMask256::new();
        for &b in bits {
            m.set(b);
        }
        m
    }

    #[test]
    fn select_and_rank_fig_example() {
        // Set bits {1, 2, 4}: the 2nd set bit (counting from 0) is at
        // position 4, and 2 set bits lie below position 4.
        let m = mask_from_bits(&[1, 2, 4]);
        assert_eq!(m.select(2), 4);
        assert_eq!(m.rank(4), 2);
        assert_eq!(m.rank(1), 0);
    }

    #[test]
    fn select_on_all_ones_is_identity() {
        let mut m = TexelMask256::new();
        for b in 0..256 {
            m.set(b);
        }
        for i in [0u32, 1, 63, 64, 100, 255] {
            assert_eq!(m.select(i), i);
        }
    }

    #[test]
    fn remap_example_mask() {
        // Active mask 11101010 with four texels needed: producer roles land
        // on lanes {1, 3, 5, 6}.
        let mask = 0b1110_1010u32;
        let lanes: Vec<u32> = (0..4).map(|i| nth_active_lane(mask, i)).collect();
        assert_eq!(lanes, vec![1, 3, 5, 6]);
    }

    #[test]
    fn lane_idx_coord_examples() {
        assert_eq!(lane_idx_to_coord(0, ivec2(10, 20), 4), ivec2(10, 20));
        assert_eq!(lane_idx_to_coord(5, ivec2(10, 20), 4), ivec2(11, 21));
        for lane in 0..12 {
            let c = lane_idx_to_coord(lane, ivec2(-3, 7), 4);
            assert_eq!(coord_to_lane_idx(c, ivec2(-3, 7), 4), lane);
        }
    }

    /// A wave whose lanes sample `tex` at the given uvs.
    fn wave_setup(
        tex: &Texture<f32>,
        kind: FilterKind,
        uvs: &[[f32; 2]; 32],
        active: LaneMask,
    ) -> (Wave, LaneVec<FilterFootprint<f32>>) {
        let wave = Wave::new(active);
        let fps = LaneVec::from_fn(active, |l| footprint(uvs[l as usize], tex.dims(), kind));
        (wave, fps)
    }

    fn quad_uvs(mag: f64, rot_deg: f64, origin: [f64; 2], dims: IVec2) -> [[f32; 2]; 32] {
        let (s, c) = rot_deg.to_radians().sin_cos();
        let mut uvs = [[0.0f32; 2]; 32];
        for lane in 0..32 {
            let px = (lane % 8) as f64 + origin[0];
            let py = (lane / 8) as f64 + origin[1];
            let tx = (c * px + s * py) / mag;
            let ty = (-s * px + c * py) / mag;
            uvs[lane] = [
                ((tx + 0.5 * dims.x as f64) / dims.x as f64) as f32,
                ((ty + 0.5 * dims.y as f64) / dims.y as f64) as f32,
            ];
        }
        uvs
    }

    fn run_all(
        wave: &Wave,
        fps: &LaneVec<FilterFootprint<f32>>,
        tex: &Texture<f32>,
    ) -> [CtfOutcome<Rgba<f32>>; 3] {
        [
            box_sampling(wave, fps, |c| tex.fetch(c), true),
            mask_sampling(wave, fps, |c| tex.fetch(c), 16, true),
            list_building(wave, fps, |c| tex.fetch(c), true),
        ]
    }

    #[test]
    fn degenerate_wave_single_footprint_is_exact() {
        // Extreme magnification: all 32 lanes share one footprint, the AABB
        // collapses to 2x2 and lanes 0..3 produce.
        let tex = Texture::<f32>::value_noise(ivec2(64, 64), 5);
        let uv = [0.413, 0.618];
        let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &[uv; 32], u32::MAX);
        let expect = ground_truth_filter(&tex, uv, FilterKind::Bilinear);
        for outcome in run_all(&wave, &fps, &tex) {
            match outcome {
                CtfOutcome::PerLaneColor(colors) => {
                    for lane in 0..32 {
                        assert_eq!(colors.get(lane), expect);
                    }
                }
                other => panic!("expected exact result, got {other:?}"),
            }
        }
        assert_eq!(wave.unread_lane_reads(), 0);
    }

    #[test]
    fn exactness_against_ground_truth_bit_for_bit() {
        let tex = Texture::<f32>::value_noise(ivec2(128, 128), 9);
        for kind in [FilterKind::Bilinear, FilterKind::BicubicBSpline, FilterKind::CatmullRom] {
            // Magnification 6 keeps even the 4x4 footprints within a wave's
            // budget at 45 degrees.
            let uvs = quad_uvs(6.0, 45.0, [17.3, -4.2], tex.dims());
            let (wave, fps) = wave_setup(&tex, kind, &uvs, u32::MAX);
            for outcome in run_all(&wave, &fps, &tex) {
                match outcome {
                    CtfOutcome::PerLaneColor(colors) => {
                        for lane in 0..32 {
                            let expect = ground_truth_filter(&tex, uvs[lane as usize], kind);
                            assert_eq!(colors.get(lane), expect, "kind {kind:?} lane {lane}");
                        }
                    }
                    other => panic!("{kind:?}: expected exact result, got {other:?}"),
                }
            }
            assert_eq!(wave.unread_lane_reads(), 0);
        }
    }

    #[test]
    fn produced_coordinates_are_unique_and_at_most_one_per_lane() {
        let tex = Texture::<f32>::value_noise(ivec2(128, 128), 2);
        let uvs = quad_uvs(2.0, 30.0, [3.7, 9.1], tex.dims());
        let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &uvs, u32::MAX);

        for run in 0..3 {
            let mut coords = Vec::new();
            let mut count = 0u32;
            {
                let mut produce = |c: IVec2| {
                    coords.push(c);
                    count += 1;
                    tex.fetch(c)
                };
                let outcome = match run {
                    0 => box_sampling(&wave, &fps, &mut produce, true),
                    1 => mask_sampling(&wave, &fps, &mut produce, 16, true),
                    _ => list_building(&wave, &fps, &mut produce, true),
                };
                assert!(outcome.is_exact());
            }
            let set: BTreeSet<IVec2> = coords.iter().copied().collect();
            assert_eq!(set.len(), coords.len(), "duplicate production");
            assert!(count <= wave.active_count(), "more than one eval per lane");
        }
    }

    #[test]
    fn aabb_too_large_falls_back() {
        // Magnification well below 1: footprints spread far apart.
        let tex = Texture::<f32>::gradient(ivec2(512, 512));
        let uvs = quad_uvs(0.25, 0.0, [100.0, 100.0], tex.dims());
        let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &uvs, u32::MAX);
        match box_sampling(&wave, &fps, |c| tex.fetch(c), true) {
            CtfOutcome::FallbackNeeded(FallbackReason::AabbTooLarge) => {}
            other => panic!("expected AabbTooLarge, got {other:?}"),
        }
        match mask_sampling(&wave, &fps, |c| tex.fetch(c), 16, true) {
            CtfOutcome::FallbackNeeded(FallbackReason::MaskTooLarge) => {}
            other => panic!("expected MaskTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn partial_wave_needs_remapping() {
        let tex = Texture::<f32>::value_noise(ivec2(128, 128), 4);
        let uvs = quad_uvs(4.0, 10.0, [3.0, 5.0], tex.dims());
        // Lane 0 inactive: the contiguous fast path cannot apply.
        let active = u32::MAX & !1;
        let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &uvs, active);

        match mask_sampling(&wave, &fps, |c| tex.fetch(c), 16, false) {
            CtfOutcome::FallbackNeeded(FallbackReason::LanesNotContiguous) => {}
            other => panic!("expected LanesNotContiguous with remap off, got {other:?}"),
        }
        match mask_sampling(&wave, &fps, |c| tex.fetch(c), 16, true) {
            CtfOutcome::PerLaneColor(colors) => {
                for lane in wave.active_lanes() {
                    let expect =
                        ground_truth_filter(&tex, uvs[lane as usize], FilterKind::Bilinear);
                    assert_eq!(colors.get(lane), expect);
                }
            }
            other => panic!("expected exact result with remap on, got {other:?}"),
        }
        assert_eq!(wave.unread_lane_reads(), 0);
    }

    #[test]
    fn list_merge_examples() {
        let tex = Texture::<f32>::gradient(ivec2(64, 64));
        // Two active lanes with disjoint 2x2 footprints: 8 unique texels.
        let mut uvs = [[0.2f32, 0.2]; 32];
        uvs[1] = [0.7, 0.7];
        let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &uvs, 0b11);
        assert_eq!(unique_texel_list(&wave, &fps).len(), 8);

        // Fully overlapping lists collapse to 4 entries.
        let uvs = [[0.2f32, 0.2]; 32];
        let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &uvs, 0b11);
        assert_eq!(unique_texel_list(&wave, &fps).len(), 4);
    }

    proptest! {
        // Rank is the inverse of select on every set bit.
        #[test]
        fn select_rank_round_trip(words in prop::array::uniform4(any::<u64>())) {
            let m = TexelMask256 { words };
            let n = m.popcount();
            for i in 0..n {
                let t = m.select(i);
                prop_assert!(m.test(t));
                prop_assert_eq!(m.rank(t), i);
            }
            if n > 0 {
                prop_assert_eq!(m.rank(m.select(0)), 0);
            }
        }

        // Producer roles land on distinct active lanes.
        #[test]
        fn remap_assigns_distinct_active_lanes(mask in any::<u32>().prop_filter("nonzero", |m| *m != 0)) {
            let n = mask.count_ones();
            let mut seen = BTreeSet::new();
            for i in 0..n {
                let lane = nth_active_lane(mask, i);
                prop_assert!(mask & (1 << lane) != 0);
                prop_assert!(seen.insert(lane));
            }
        }

        // Unique-count equals a brute-force set over all lane footprints.
        #[test]
        fn list_unique_count_matches_set_oracle(seed in any::<u64>(), mag in 0.5f64..4.0, rot in 0.0f64..90.0) {
            let tex = Texture::<f32>::gradient(ivec2(256, 256));
            let uvs = quad_uvs(mag, rot, [seed as f64 % 31.0, seed as f64 % 17.0], tex.dims());
            let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &uvs, u32::MAX);
            let merged = unique_texel_list(&wave, &fps);
            let mut set = BTreeSet::new();
            for lane in 0..32u32 {
                let fp = fps.get(lane);
                for tap in 0..fp.tap_count() {
                    set.insert(fp.tap_coord(tap));
                }
            }
            prop_assert_eq!(merged.len(), set.len());
            let merged_set: BTreeSet<IVec2> = merged.into_iter().collect();
            prop_assert_eq!(merged_set, set);
        }

        // Success dominance on quad-style waves: List succeeds whenever Mask
        // does, Mask succeeds whenever Box does.
        #[test]
        fn success_dominance(mag in 1.0f64..4.0, rot in 0.0f64..90.0, ox in 0.0f64..64.0, oy in 0.0f64..64.0) {
            let tex = Texture::<f32>::gradient(ivec2(512, 512));
            let uvs = quad_uvs(mag, rot, [ox, oy], tex.dims());
            let (wave, fps) = wave_setup(&tex, FilterKind::Bilinear, &uvs, u32::MAX);
            let [b, m, l] = run_all(&wave, &fps, &tex);
            if b.is_exact() {
                prop_assert!(m.is_exact());
            }
            if m.is_exact() {
                prop_assert!(l.is_exact());
            }
        }
    }
}
