//! Frame renderer: traverses the image in 8x4 wave tiles, runs the selected
//! filtering strategy per wave (with the configured fallback where exact
//! filtering is impossible), and accumulates instrumentation.
//!
//! Filtering happens before shading on every wave-sharing path; the one-tap
//! paths shade the single sampled texel instead (filtering after shading).

use rayon::prelude::*;

use crate::baselines::{one_tap_stf, one_tap_stf_positivized, wave_comm_stf};
use crate::ctf::{box_sampling, list_building, mask_sampling, unique_texel_list, CtfOutcome, FallbackReason};
use crate::fallback::{fallback_c, fallback_c_plus};
use crate::filters::{footprint, footprint_bounds, FilterFootprint, FilterKind};
use crate::geom::{ivec2, IVec2, Rgba};
use crate::rng::{draw, FrameRng};
use crate::scalar::Real;
use crate::scene::{shade, Coverage, MaterialSample, PixelMap, QuadScene};
use crate::wave::{LaneVec, Wave, WAVE_TILE_H, WAVE_TILE_W};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    GroundTruth,
    OneTap,
    OneTapPositivized,
    WaveComm,
    Box,
    Mask,
    List,
}

impl Algorithm {
    pub fn is_collaborative(self) -> bool {
        matches!(self, Algorithm::Box | Algorithm::Mask | Algorithm::List)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackKind {
    None,
    OneTap,
    WaveComm,
    C,
    CPlus,
}

#[derive(Debug, Clone)]
pub struct FrameConfig {
    pub resolution: (u32, u32),
    pub algorithm: Algorithm,
    pub fallback: FallbackKind,
    pub filter: FilterKind,
    /// Bit-grid width for Mask Sampling; defaults to 11 for bilinear and 16
    /// for the bicubic kinds when unset.
    pub mask_width: Option<u32>,
    pub seed: u64,
    pub frame: u32,
    pub spp: u32,
    pub coverage: Coverage,
    pub edge_remap: bool,
    /// Route every wave through the fallback (fallback evaluation mode).
    pub force_fallback: bool,
    /// Track the per-wave unique-texel maximum (costs a merge per wave).
    pub collect_unique_texels: bool,
}

impl FrameConfig {
    pub fn new(algorithm: Algorithm, fallback: FallbackKind, filter: FilterKind) -> Self {
        FrameConfig {
            resolution: (512, 512),
            algorithm,
            fallback,
            filter,
            mask_width: None,
            seed: 0,
            frame: 0,
            spp: 1,
            coverage: Coverage::Full,
            edge_remap: true,
            force_fallback: false,
            collect_unique_texels: false,
        }
    }

    pub fn resolved_mask_width(&self) -> u32 {
        self.mask_width.unwrap_or(match self.filter {
            FilterKind::Bilinear => 11,
            _ => 16,
        })
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.resolution.0 == 0 || self.resolution.1 == 0 {
            return Err("resolution must be nonzero".into());
        }
        if self.spp == 0 {
            return Err("spp must be at least 1".into());
        }
        let w = self.resolved_mask_width();
        if w < self.filter.extent() || w > 16 {
            return Err(format!("mask width {w} out of range for this filter"));
        }
        if self.algorithm.is_collaborative() && self.fallback == FallbackKind::None {
            return Err("collaborative algorithms require a fallback choice".into());
        }
        if self.force_fallback && !self.algorithm.is_collaborative() {
            return Err("force-fallback only applies to collaborative algorithms".into());
        }
        let negative = self.filter.has_negative_weights();
        if negative {
            if matches!(self.algorithm, Algorithm::OneTap) {
                return Err("one-tap STF cannot sample negative weights; use one-tap-pos".into());
            }
            if matches!(self.algorithm, Algorithm::WaveComm)
                || (self.algorithm.is_collaborative() && self.fallback == FallbackKind::WaveComm)
            {
                return Err("wave-communication STF does not support negative weights".into());
            }
            if self.algorithm.is_collaborative() && self.fallback == FallbackKind::OneTap {
                return Err("one-tap fallback cannot sample negative weights".into());
            }
        }
        Ok(())
    }
}

/// Per-frame counters. Fractions are over waves that contain covered
/// pixels; perfect and fallback fractions sum to one.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FrameStats {
    pub covered_pixels: u64,
    pub waves_covered: u64,
    pub perfect_waves: u64,
    pub fallback_waves: u64,
    pub produced_texels: u64,
    pub unread_lane_reads: u64,
    pub max_unique_texels_per_wave: u32,
}

impl FrameStats {
    pub fn merged(mut self, o: FrameStats) -> FrameStats {
        self.covered_pixels += o.covered_pixels;
        self.waves_covered += o.waves_covered;
        self.perfect_waves += o.perfect_waves;
        self.fallback_waves += o.fallback_waves;
        self.produced_texels += o.produced_texels;
        self.unread_lane_reads += o.unread_lane_reads;
        self.max_unique_texels_per_wave =
            self.max_unique_texels_per_wave.max(o.max_unique_texels_per_wave);
        self
    }

    pub fn texel_evals_per_pixel(&self) -> f64 {
        if self.covered_pixels == 0 {
            0.0
        } else {
            self.produced_texels as f64 / self.covered_pixels as f64
        }
    }

    pub fn fallback_wave_fraction(&self) -> f64 {
        if self.waves_covered == 0 {
            0.0
        } else {
            self.fallback_waves as f64 / self.waves_covered as f64
        }
    }

    pub fn perfect_wave_fraction(&self) -> f64 {
        if self.waves_covered == 0 {
            0.0
        } else {
            self.perfect_waves as f64 / self.waves_covered as f64
        }
    }
}

/// A linear RGBA framebuffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<S> {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<Rgba<S>>,
}

impl<S: Real> Image<S> {
    pub fn new(width: u32, height: u32) -> Self {
        Image {
            width,
            height,
            pixels: vec![Rgba::zero(); (width * height) as usize],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> Rgba<S> {
        self.pixels[(y * self.width + x) as usize]
    }
}

/// Render one frame: spp independent passes with distinct random streams,
/// averaged. Identical config and seed give a bit-identical image, and waves
/// may be processed in parallel without changing the result.
pub fn render_frame<S: Real>(config: &FrameConfig, scene: &QuadScene<S>) -> (Image<S>, FrameStats) {
    if let Err(e) = config.validate() {
        panic!("invalid frame config: {e}");
    }
    let (w, h) = config.resolution;
    let mut acc = Image::new(w, h);
    let mut total = FrameStats::default();
    for sample in 0..config.spp {
        let rng = FrameRng::new(config.seed, config.frame, sample);
        let (pass, stats) = render_pass(config, scene, &rng);
        for (a, p) in acc.pixels.iter_mut().zip(&pass.pixels) {
            *a += *p;
        }
        total = total.merged(stats);
    }
    let inv = S::of(1.0 / config.spp as f64);
    for p in &mut acc.pixels {
        *p = *p * inv;
    }
    (acc, total)
}

fn render_pass<S: Real>(
    config: &FrameConfig,
    scene: &QuadScene<S>,
    rng: &FrameRng,
) -> (Image<S>, FrameStats) {
    let (w, h) = config.resolution;
    let map = PixelMap::new(scene, config.resolution);
    let mut img = Image::new(w, h);
    let tiles_x = (w + WAVE_TILE_W - 1) / WAVE_TILE_W;
    let band_len = (w * WAVE_TILE_H) as usize;

    let stats = img
        .pixels
        .par_chunks_mut(band_len)
        .enumerate()
        .map(|(band, slice)| {
            let y0 = band as u32 * WAVE_TILE_H;
            let mut st = FrameStats::default();
            for tx in 0..tiles_x {
                render_wave(config, scene, &map, rng, (tx * WAVE_TILE_W, y0), slice, &mut st);
            }
            st
        })
        .reduce(FrameStats::default, FrameStats::merged);
    (img, stats)
}

fn render_wave<S: Real>(
    config: &FrameConfig,
    scene: &QuadScene<S>,
    map: &PixelMap,
    rng: &FrameRng,
    origin: (u32, u32),
    band: &mut [Rgba<S>],
    stats: &mut FrameStats,
) {
    let (w, h) = config.resolution;
    let mut active = 0u32;
    let mut pixels = LaneVec::new();
    for lane in 0..(WAVE_TILE_W * WAVE_TILE_H) {
        let px = origin.0 + lane % WAVE_TILE_W;
        let py = origin.1 + lane / WAVE_TILE_W;
        if px < w && py < h {
            let p = ivec2(px as i32, py as i32);
            if config.coverage.covers(p, config.resolution) {
                active |= 1 << lane;
                pixels.set(lane, p);
            }
        }
    }
    if active == 0 {
        return;
    }
    stats.waves_covered += 1;
    stats.covered_pixels += u64::from(active.count_ones());

    let wave = Wave::new(active);
    let dims = scene.diffuse.dims();
    let fps: LaneVec<FilterFootprint<S>> = LaneVec::from_fn(active, |l| {
        let uv = map.uv(pixels.get(l));
        footprint([S::of(uv[0]), S::of(uv[1])], dims, config.filter)
    });

    if config.collect_unique_texels {
        let unique = unique_texel_list(&wave, &fps).len() as u32;
        stats.max_unique_texels_per_wave = stats.max_unique_texels_per_wave.max(unique);
    }

    let light = scene.light_dir;
    let material = |c: IVec2| MaterialSample {
        diffuse: scene.diffuse.fetch(c),
        normal: scene.normal.fetch(c),
    };
    let shade_mat = |m: MaterialSample<S>| shade(m.diffuse, m.normal, light);
    let mut produced: u64 = 0;

    let shaded: LaneVec<Rgba<S>> = match config.algorithm {
        Algorithm::GroundTruth => {
            stats.perfect_waves += 1;
            let mut out = LaneVec::new();
            for lane in wave.active_lanes() {
                let fp = fps.get(lane);
                produced += fp.tap_count() as u64;
                out.set(lane, shade_mat(fp.filter(material)));
            }
            out
        }
        Algorithm::OneTap => {
            stats.fallback_waves += 1;
            let mut out = LaneVec::new();
            for lane in wave.active_lanes() {
                let u = rng.unit(pixels.get(lane), draw::PRIMARY);
                let v = one_tap_stf(
                    &fps.get(lane),
                    |c| {
                        produced += 1;
                        shade_mat(material(c))
                    },
                    u,
                );
                out.set(lane, v);
            }
            out
        }
        Algorithm::OneTapPositivized => {
            stats.fallback_waves += 1;
            let mut out = LaneVec::new();
            for lane in wave.active_lanes() {
                let p = pixels.get(lane);
                let v = one_tap_stf_positivized(
                    &fps.get(lane),
                    |c| {
                        produced += 1;
                        shade_mat(material(c))
                    },
                    rng.unit(p, draw::PRIMARY),
                    rng.unit(p, draw::SECONDARY),
                );
                out.set(lane, v);
            }
            out
        }
        Algorithm::WaveComm => {
            stats.fallback_waves += 1;
            let mats = wave_comm_stf(
                &wave,
                &fps,
                |c| {
                    produced += 1;
                    material(c)
                },
                rng,
                &pixels,
            );
            shade_lanes(&wave, &mats, shade_mat)
        }
        Algorithm::Box | Algorithm::Mask | Algorithm::List => {
            let outcome = if config.force_fallback {
                CtfOutcome::FallbackNeeded(FallbackReason::TooManyTexels)
            } else {
                let counting = |c: IVec2| {
                    produced += 1;
                    material(c)
                };
                match config.algorithm {
                    Algorithm::Box => box_sampling(&wave, &fps, counting, config.edge_remap),
                    Algorithm::Mask => mask_sampling(
                        &wave,
                        &fps,
                        counting,
                        config.resolved_mask_width(),
                        config.edge_remap,
                    ),
                    _ => list_building(&wave, &fps, counting, config.edge_remap),
                }
            };
            match outcome {
                CtfOutcome::PerLaneColor(mats) => {
                    stats.perfect_waves += 1;
                    shade_lanes(&wave, &mats, shade_mat)
                }
                CtfOutcome::FallbackNeeded(_) => {
                    stats.fallback_waves += 1;
                    match config.fallback {
                        FallbackKind::C => {
                            let mats = fallback_c(
                                &wave,
                                &fps,
                                |c| {
                                    produced += 1;
                                    material(c)
                                },
                                rng,
                                &pixels,
                            );
                            shade_lanes(&wave, &mats, shade_mat)
                        }
                        FallbackKind::CPlus => {
                            let mats = fallback_c_plus(
                                &wave,
                                &fps,
                                |c| {
                                    produced += 1;
                                    material(c)
                                },
                                rng,
                                &pixels,
                            );
                            shade_lanes(&wave, &mats, shade_mat)
                        }
                        FallbackKind::WaveComm => {
                            let mats = wave_comm_stf(
                                &wave,
                                &fps,
                                |c| {
                                    produced += 1;
                                    material(c)
                                },
                                rng,
                                &pixels,
                            );
                            shade_lanes(&wave, &mats, shade_mat)
                        }
                        FallbackKind::OneTap => {
                            let mut out = LaneVec::new();
                            for lane in wave.active_lanes() {
                                let u = rng.unit(pixels.get(lane), draw::PRIMARY);
                                let v = one_tap_stf(
                                    &fps.get(lane),
                                    |c| {
                                        produced += 1;
                                        shade_mat(material(c))
                                    },
                                    u,
                                );
                                out.set(lane, v);
                            }
                            out
                        }
                        FallbackKind::None => unreachable!("validated"),
                    }
                }
            }
        }
    };

    for lane in wave.active_lanes() {
        let p = pixels.get(lane);
        let idx = ((p.y as u32 - origin.1) * w + p.x as u32) as usize;
        band[idx] = shaded.get(lane);
    }
    stats.unread_lane_reads += wave.unread_lane_reads();
    stats.produced_texels += produced;
}

fn shade_lanes<S: Real>(
    wave: &Wave,
    mats: &LaneVec<MaterialSample<S>>,
    shade_mat: impl Fn(MaterialSample<S>) -> Rgba<S>,
) -> LaneVec<Rgba<S>> {
    let mut out = LaneVec::new();
    for lane in wave.active_lanes() {
        out.set(lane, shade_mat(mats.get(lane)));
    }
    out
}

/// Per-frame success probe: evaluates, without producing any texels, which
/// waves each collaborative algorithm could filter exactly. Used by the
/// success-map and texel-bound experiments.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrameProbe {
    pub waves: u64,
    pub box_fallback_waves: u64,
    pub mask_fallback_waves: u64,
    pub list_fallback_waves: u64,
    pub max_unique_texels: u32,
}

impl FrameProbe {
    pub fn merged(mut self, o: FrameProbe) -> FrameProbe {
        self.waves += o.waves;
        self.box_fallback_waves += o.box_fallback_waves;
        self.mask_fallback_waves += o.mask_fallback_waves;
        self.list_fallback_waves += o.list_fallback_waves;
        self.max_unique_texels = self.max_unique_texels.max(o.max_unique_texels);
        self
    }
}

pub fn probe_frame<S: Real>(
    scene: &QuadScene<S>,
    resolution: (u32, u32),
    filter: FilterKind,
    coverage: &Coverage,
    mask_width: u32,
    texels_per_lane: u32,
) -> FrameProbe {
    let (w, h) = resolution;
    let map = PixelMap::new(scene, resolution);
    let dims = scene.diffuse.dims();
    let extent = filter.extent() as i32;
    let tiles_x = (w + WAVE_TILE_W - 1) / WAVE_TILE_W;
    let tiles_y = (h + WAVE_TILE_H - 1) / WAVE_TILE_H;

    let mut probe = FrameProbe::default();
    for ty in 0..tiles_y {
        for tx in 0..tiles_x {
            let mut active = 0u32;
            let mut uls = [ivec2(0, 0); 32];
            for lane in 0..(WAVE_TILE_W * WAVE_TILE_H) {
                let px = tx * WAVE_TILE_W + lane % WAVE_TILE_W;
                let py = ty * WAVE_TILE_H + lane / WAVE_TILE_W;
                if px < w && py < h {
                    let p = ivec2(px as i32, py as i32);
                    if coverage.covers(p, resolution) {
                        let uv = map.uv(p);
                        let (ul, _) = footprint_bounds::<S>([S::of(uv[0]), S::of(uv[1])], dims, filter);
                        uls[lane as usize] = ul;
                        active |= 1 << lane;
                    }
                }
            }
            if active == 0 {
                continue;
            }
            probe.waves += 1;
            let lanes = active.count_ones();
            let budget = lanes * texels_per_lane;

            let mut ul = ivec2(i32::MAX, i32::MAX);
            let mut lr = ivec2(i32::MIN, i32::MIN);
            for lane in 0..32 {
                if active & (1 << lane) != 0 {
                    ul = ul.min(uls[lane]);
                    lr = lr.max(uls[lane] + ivec2(extent - 1, extent - 1));
                }
            }
            let bb = lr - ul + ivec2(1, 1);
            let area = (bb.x * bb.y) as u32;

            let unique = unique_texel_count(active, &uls, ul, bb, extent);

            if area > budget {
                probe.box_fallback_waves += 1;
            }
            if bb.x as u32 > mask_width || bb.y as u32 > mask_width || unique > budget {
                probe.mask_fallback_waves += 1;
            }
            if unique > budget {
                probe.list_fallback_waves += 1;
            }
            probe.max_unique_texels = probe.max_unique_texels.max(unique);
        }
    }
    probe
}

fn unique_texel_count(active: u32, uls: &[IVec2; 32], ul: IVec2, bb: IVec2, extent: i32) -> u32 {
    if bb.x <= 16 && bb.y <= 16 {
        let mut mask = crate::ctf::TexelMask256::new();
        for lane in 0..32 {
            if active & (1 << lane) != 0 {
                mask.set_block(uls[lane] - ul, extent as u32, 16);
            }
        }
        mask.popcount()
    } else {
        let mut set = std::collections::BTreeSet::new();
        for lane in 0..32 {
            if active & (1 << lane) != 0 {
                for dy in 0..extent {
                    for dx in 0..extent {
                        set.insert(uls[lane] + ivec2(dx, dy));
                    }
                }
            }
        }
        set.len() as u32
    }
}
