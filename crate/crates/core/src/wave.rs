//! Lockstep wave execution model and the wave intrinsics built on it.
//!
//! A wave is a group of up to 32 lanes executing in lockstep. Algorithm
//! phases run as whole-wave steps; divergence is expressed as per-lane
//! predication via the active mask. Collective operations consume values
//! from active lanes only and are deterministic for fixed inputs.

use std::cell::Cell;
use std::ops::BitOr;

/// Maximum number of lanes in a wave. The tested contract is exactly 32;
/// smaller widths are accepted for experiments.
pub const MAX_LANES: u32 = 32;

/// Wave tile shape in pixels, row-major lane numbering:
/// `lane = WAVE_TILE_W * y_local + x_local`.
pub const WAVE_TILE_W: u32 = 8;
pub const WAVE_TILE_H: u32 = 4;

/// Bitset of lanes, bit i <-> lane i.
pub type LaneMask = u32;

pub fn full_mask(lane_count: u32) -> LaneMask {
    if lane_count >= 32 {
        u32::MAX
    } else {
        (1u32 << lane_count) - 1
    }
}

/// Per-lane register slots for one value type. Tracks which lanes actually
/// wrote a value so that reading an unwritten lane can be diagnosed.
#[derive(Debug, Clone)]
pub struct LaneVec<T> {
    vals: [T; MAX_LANES as usize],
    written: LaneMask,
}

impl<T: Copy + Default> LaneVec<T> {
    pub fn new() -> Self {
        LaneVec {
            vals: [T::default(); MAX_LANES as usize],
            written: 0,
        }
    }

    pub fn set(&mut self, lane: u32, v: T) {
        self.vals[lane as usize] = v;
        self.written |= 1 << lane;
    }

    /// Direct slot access, bypassing wave semantics. Test oracles and result
    /// extraction use this; algorithm gather paths go through
    /// [`Wave::read_lane_at`].
    pub fn get(&self, lane: u32) -> T {
        self.vals[lane as usize]
    }

    pub fn is_written(&self, lane: u32) -> bool {
        self.written & (1 << lane) != 0
    }

    pub fn from_fn(lanes: LaneMask, mut f: impl FnMut(u32) -> T) -> Self {
        let mut v = LaneVec::new();
        for lane in 0..MAX_LANES {
            if lanes & (1 << lane) != 0 {
                v.set(lane, f(lane));
            }
        }
        v
    }
}

impl<T: Copy + Default> Default for LaneVec<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// A lockstep group of lanes with an active mask and diagnostic counters.
#[derive(Debug)]
pub struct Wave {
    lane_count: u32,
    active: LaneMask,
    unread_lane_reads: Cell<u64>,
}

impl Wave {
    /// A full 32-lane wave.
    pub fn full() -> Self {
        Wave::new(u32::MAX)
    }

    /// A 32-lane wave with the given active mask (at least one lane set).
    pub fn new(active: LaneMask) -> Self {
        Wave::with_lane_count(MAX_LANES, active)
    }

    pub fn with_lane_count(lane_count: u32, active: LaneMask) -> Self {
        assert!(
            lane_count >= 1 && lane_count <= MAX_LANES,
            "lane count {lane_count} out of range"
        );
        let active = active & full_mask(lane_count);
        assert!(active != 0, "a wave must have at least one active lane");
        Wave {
            lane_count,
            active,
            unread_lane_reads: Cell::new(0),
        }
    }

    pub fn lane_count(&self) -> u32 {
        self.lane_count
    }

    /// WaveActiveBallot(true): the active-lane mask.
    pub fn ballot(&self) -> LaneMask {
        self.active
    }

    pub fn active_count(&self) -> u32 {
        self.active.count_ones()
    }

    pub fn is_active(&self, lane: u32) -> bool {
        self.active & (1 << lane) != 0
    }

    pub fn active_lanes(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.lane_count).filter(move |l| self.is_active(*l))
    }

    /// Fold a commutative operation over the active lanes' values.
    /// Panics when no lane is active: that is a simulator bug, not a
    /// recoverable condition.
    pub fn active_reduce<T: Copy + Default>(
        &self,
        vals: &LaneVec<T>,
        op: impl Fn(T, T) -> T,
    ) -> T {
        let mut it = self.active_lanes();
        let first = it.next().expect("collective op on a wave with no active lanes");
        let mut acc = vals.get(first);
        for lane in it {
            acc = op(acc, vals.get(lane));
        }
        acc
    }

    /// WaveActiveMin over integer pairs, componentwise.
    pub fn active_min(&self, vals: &LaneVec<crate::geom::IVec2>) -> crate::geom::IVec2 {
        self.active_reduce(vals, |a, b| a.min(b))
    }

    /// WaveActiveMax over integer pairs, componentwise.
    pub fn active_max(&self, vals: &LaneVec<crate::geom::IVec2>) -> crate::geom::IVec2 {
        self.active_reduce(vals, |a, b| a.max(b))
    }

    /// WaveActiveBitOr over any bit-mask value.
    pub fn active_bit_or<T: Copy + Default + BitOr<Output = T>>(&self, vals: &LaneVec<T>) -> T {
        self.active_reduce(vals, |a, b| a | b)
    }

    /// WaveReadLaneAt: value held by `src_lane`, regardless of caller lane.
    ///
    /// Reading a lane that never produced a value in this algorithm step is
    /// defined: it returns the default value and bumps a diagnostic counter,
    /// so tests can assert the counter stays zero on exact paths.
    pub fn read_lane_at<T: Copy + Default>(&self, vals: &LaneVec<T>, src_lane: u32) -> T {
        assert!(src_lane < self.lane_count, "lane index {src_lane} out of range");
        if !vals.is_written(src_lane) {
            self.unread_lane_reads.set(self.unread_lane_reads.get() + 1);
        }
        vals.get(src_lane)
    }

    /// True iff lanes `0..count-1` are all active.
    pub fn lanes_lower_than_count_active(&self, count: u32) -> bool {
        assert!(count <= self.lane_count);
        let desired = full_mask(count);
        (self.active & desired) == desired
    }

    /// Number of reads from lanes that never produced a value. Zero on every
    /// exact filtering path.
    pub fn unread_lane_reads(&self) -> u64 {
        self.unread_lane_reads.get()
    }
}
