//! Experiment driver: renders the quad test scene and reproduces the
//! simulator's threshold, bound, quality and cost experiments as CSV or
//! image artifacts. Every command is deterministic given its flags and
//! seed, and prints a machine-readable config header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use ctf_core::dct::{collaborative_dct_produce, DctTexture, COLLABORATIVE_MAX_TEXELS};
use ctf_core::filters::FilterKind;
use ctf_core::geom::ivec2;
use ctf_core::io::{write_f32_dump, write_ppm};
use ctf_core::metrics::{max_error_255, mse, psnr_aggregate};
use ctf_core::render::{
    probe_frame, render_frame, Algorithm, FallbackKind, FrameConfig, FrameStats, Image,
};
use ctf_core::scene::{Coverage, PixelMap, QuadScene};
use ctf_core::texture::{CostCounters, Texture};
use ctf_core::wave::{Wave, WAVE_TILE_H, WAVE_TILE_W};

#[derive(Parser)]
#[command(name = "ctf", version, about = "Collaborative texture filtering simulator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Render one frame and report its stats.
    Render(RenderCmd),
    /// Map where each collaborative algorithm needs its fallback, over a
    /// rotation/magnification grid.
    SuccessMap(SuccessMapCmd),
    /// Maximum unique texels any wave needs, per rotation.
    TexelBound(TexelBoundCmd),
    /// PSNR and max error against ground truth over a magnification grid.
    QualitySweep(QualitySweepCmd),
    /// PSNR as a function of samples per pixel.
    Convergence(ConvergenceCmd),
    /// Quality of the fallback estimators when every wave is forced to use
    /// them.
    FallbackEval(FallbackEvalCmd),
    /// Work-unit cost of DCT texel decoding, per-lane baseline versus
    /// split-channel collaborative decode.
    DctBench(DctBenchCmd),
}

#[derive(Args, Clone)]
struct SceneArgs {
    /// Quad rotation in degrees.
    #[arg(long, default_value_t = 45.0)]
    rotation: f64,
    /// Magnification factor (screen pixels per texel).
    #[arg(long, default_value_t = 2.0)]
    mag: f64,
    /// Frame resolution, WxH.
    #[arg(long, default_value = "512x512", value_parser = parse_res)]
    res: (u32, u32),
    /// Procedural texture side length.
    #[arg(long, default_value_t = 1024)]
    tex_size: i32,
    /// Procedural texture seed.
    #[arg(long, default_value_t = 1)]
    tex_seed: u64,
    /// Diffuse texture image (PNG or PPM); procedural noise when omitted.
    #[arg(long)]
    diffuse: Option<PathBuf>,
    /// Normal-map image; procedural when omitted.
    #[arg(long)]
    normal: Option<PathBuf>,
    /// Pixel coverage: full, circle=RADIUS or half-plane=ANGLE.
    #[arg(long, default_value = "full", value_parser = parse_coverage)]
    coverage: Coverage,
}

impl SceneArgs {
    fn scene(&self) -> Result<QuadScene<f32>> {
        let diffuse = match &self.diffuse {
            Some(p) => Texture::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => Texture::value_noise(ivec2(self.tex_size, self.tex_size), self.tex_seed),
        };
        let normal = match &self.normal {
            Some(p) => Texture::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => Texture::noise_normal_map(
                ivec2(self.tex_size, self.tex_size),
                self.tex_seed.wrapping_add(0x9E37),
            ),
        };
        if diffuse.dims() != normal.dims() {
            bail!("diffuse and normal maps must share dimensions");
        }
        Ok(QuadScene::with_shared(
            self.rotation,
            self.mag,
            Arc::new(diffuse),
            Arc::new(normal),
            [0.35, -0.25, 0.9],
        ))
    }

    fn describe(&self) -> String {
        format!(
            "rotation={} mag={} res={}x{} coverage={} tex={}",
            self.rotation,
            self.mag,
            self.res.0,
            self.res.1,
            coverage_str(&self.coverage),
            match &self.diffuse {
                Some(p) => p.display().to_string(),
                None => format!("noise:{}x{}:seed{}", self.tex_size, self.tex_size, self.tex_seed),
            }
        )
    }
}

#[derive(Args, Clone)]
struct FilterArgs {
    /// Texture filter: bilinear, bspline or catmull-rom.
    #[arg(long, default_value = "bilinear", value_parser = parse_filter)]
    filter: FilterKind,
    /// Mask-sampling bit-grid width (defaults to 11 for bilinear, 16 for
    /// the bicubic filters).
    #[arg(long)]
    mask_width: Option<u32>,
}

#[derive(Args, Clone)]
struct RenderCmd {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    filter: FilterArgs,
    /// Filtering strategy: ground-truth, one-tap, one-tap-pos, wave-comm,
    /// box, mask or list.
    #[arg(long, default_value = "mask", value_parser = parse_algo)]
    algo: Algorithm,
    /// Fallback for the collaborative strategies: none, one-tap, wave-comm,
    /// c or c-plus.
    #[arg(long, default_value = "c-plus", value_parser = parse_fallback)]
    fallback: FallbackKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    spp: u32,
    /// Disable edge remapping of producer roles at partially active waves.
    #[arg(long)]
    no_edge_remap: bool,
    /// Route every wave through the fallback.
    #[arg(long)]
    force_fallback: bool,
    /// Output PPM path.
    #[arg(long, default_value = "render.ppm")]
    out: PathBuf,
    /// Also write a raw 32-bit float dump.
    #[arg(long)]
    float_out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SuccessMapCmd {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    filter: FilterArgs,
    #[arg(long, default_value_t = 0.0)]
    rot_start: f64,
    #[arg(long, default_value_t = 90.0)]
    rot_end: f64,
    #[arg(long, default_value_t = 1.0)]
    rot_step: f64,
    #[arg(long, default_value_t = 1.0)]
    mag_start: f64,
    #[arg(long, default_value_t = 4.0)]
    mag_end: f64,
    #[arg(long, default_value_t = 0.01)]
    mag_step: f64,
    /// Texel-production budget per lane (1, or 2 for the counting-only
    /// two-evaluation analysis).
    #[arg(long, default_value_t = 1)]
    texels_per_lane: u32,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct TexelBoundCmd {
    #[command(flatten)]
    scene: SceneArgs,
    #[arg(long, default_value_t = 0.0)]
    rot_start: f64,
    #[arg(long, default_value_t = 90.0)]
    rot_end: f64,
    #[arg(long, default_value_t = 1.0)]
    rot_step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct QualitySweepCmd {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    filter: FilterArgs,
    /// Comma-separated algo[:fallback] combinations, e.g.
    /// "mask:c-plus,box:c,wave-comm,one-tap".
    #[arg(long, default_value = "mask:c-plus,box:c-plus,box:c,box:wave-comm,wave-comm,one-tap")]
    algos: String,
    #[arg(long, default_value_t = 1.0)]
    mag_start: f64,
    #[arg(long, default_value_t = 2.4)]
    mag_end: f64,
    #[arg(long, default_value_t = 0.2)]
    mag_step: f64,
    #[arg(long, default_value_t = 60)]
    frames: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    spp: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ConvergenceCmd {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    filter: FilterArgs,
    #[arg(long, default_value = "mask:c-plus,box:c-plus,wave-comm,one-tap")]
    algos: String,
    /// Comma-separated sample counts.
    #[arg(long, default_value = "1,2,4,8,16,32,64,128,256,512,1024")]
    spp_list: String,
    #[arg(long, default_value_t = 1.0)]
    mag_start: f64,
    #[arg(long, default_value_t = 2.5)]
    mag_end: f64,
    /// Number of magnification factors spread over [mag-start, mag-end].
    #[arg(long, default_value_t = 10)]
    mag_count: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct FallbackEvalCmd {
    #[command(flatten)]
    scene: SceneArgs,
    #[command(flatten)]
    filter: FilterArgs,
    /// Comma-separated fallback estimators to force on every wave.
    #[arg(long, default_value = "one-tap,wave-comm,c,c-plus")]
    fallbacks: String,
    #[arg(long, default_value_t = 1.0)]
    mag_start: f64,
    #[arg(long, default_value_t = 4.0)]
    mag_end: f64,
    #[arg(long, default_value_t = 0.25)]
    mag_step: f64,
    #[arg(long, default_value_t = 16)]
    frames: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct DctBenchCmd {
    #[command(flatten)]
    scene: SceneArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_res(s: &str) -> Result<(u32, u32), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WxH")?;
    Ok((
        w.parse().map_err(|e| format!("bad width: {e}"))?,
        h.parse().map_err(|e| format!("bad height: {e}"))?,
    ))
}

fn parse_coverage(s: &str) -> Result<Coverage, String> {
    if s == "full" {
        return Ok(Coverage::Full);
    }
    if let Some(r) = s.strip_prefix("circle=") {
        return Ok(Coverage::Circle {
            radius: r.parse().map_err(|e| format!("bad radius: {e}"))?,
        });
    }
    if let Some(a) = s.strip_prefix("half-plane=") {
        return Ok(Coverage::HalfPlane {
            angle_deg: a.parse().map_err(|e| format!("bad angle: {e}"))?,
        });
    }
    Err("expected full, circle=RADIUS or half-plane=ANGLE".into())
}

fn coverage_str(c: &Coverage) -> String {
    match c {
        Coverage::Full => "full".into(),
        Coverage::Circle { radius } => format!("circle={radius}"),
        Coverage::HalfPlane { angle_deg } => format!("half-plane={angle_deg}"),
    }
}

fn parse_filter(s: &str) -> Result<FilterKind, String> {
    match s {
        "bilinear" => Ok(FilterKind::Bilinear),
        "bspline" | "bicubic-bspline" => Ok(FilterKind::BicubicBSpline),
        "catmull-rom" => Ok(FilterKind::CatmullRom),
        _ => Err("expected bilinear, bspline or catmull-rom".into()),
    }
}

fn filter_str(f: FilterKind) -> &'static str {
    match f {
        FilterKind::Bilinear => "bilinear",
        FilterKind::BicubicBSpline => "bspline",
        FilterKind::CatmullRom => "catmull-rom",
    }
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    match s {
        "ground-truth" => Ok(Algorithm::GroundTruth),
        "one-tap" => Ok(Algorithm::OneTap),
        "one-tap-pos" => Ok(Algorithm::OneTapPositivized),
        "wave-comm" => Ok(Algorithm::WaveComm),
        "box" => Ok(Algorithm::Box),
        "mask" => Ok(Algorithm::Mask),
        "list" => Ok(Algorithm::List),
        _ => Err("expected ground-truth, one-tap, one-tap-pos, wave-comm, box, mask or list".into()),
    }
}

fn algo_str(a: Algorithm) -> &'static str {
    match a {
        Algorithm::GroundTruth => "ground-truth",
        Algorithm::OneTap => "one-tap",
        Algorithm::OneTapPositivized => "one-tap-pos",
        Algorithm::WaveComm => "wave-comm",
        Algorithm::Box => "box",
        Algorithm::Mask => "mask",
        Algorithm::List => "list",
    }
}

fn parse_fallback(s: &str) -> Result<FallbackKind, String> {
    match s {
        "none" => Ok(FallbackKind::None),
        "one-tap" => Ok(FallbackKind::OneTap),
        "wave-comm" => Ok(FallbackKind::WaveComm),
        "c" => Ok(FallbackKind::C),
        "c-plus" => Ok(FallbackKind::CPlus),
        _ => Err("expected none, one-tap, wave-comm, c or c-plus".into()),
    }
}

fn fallback_str(f: FallbackKind) -> &'static str {
    match f {
        FallbackKind::None => "none",
        FallbackKind::OneTap => "one-tap",
        FallbackKind::WaveComm => "wave-comm",
        FallbackKind::C => "c",
        FallbackKind::CPlus => "c-plus",
    }
}

/// Parse "algo[:fallback]" combinations.
fn parse_combos(s: &str) -> Result<Vec<(Algorithm, FallbackKind)>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let (a, f) = match part.split_once(':') {
            Some((a, f)) => (
                parse_algo(a).map_err(anyhow::Error::msg)?,
                parse_fallback(f).map_err(anyhow::Error::msg)?,
            ),
            None => (parse_algo(part).map_err(anyhow::Error::msg)?, FallbackKind::None),
        };
        out.push((a, f));
    }
    if out.is_empty() {
        bail!("no algorithms given");
    }
    Ok(out)
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    assert!(step > 0.0);
    let n = ((end - start) / step + 0.5).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// Collected across renders; a nonzero diagnostic makes the process exit
/// with a failure status.
#[derive(Default)]
struct Diagnostics {
    unread_lane_reads: u64,
}

impl Diagnostics {
    fn absorb(&mut self, stats: &FrameStats) {
        self.unread_lane_reads += stats.unread_lane_reads;
    }

    fn finish(self) -> Result<()> {
        if self.unread_lane_reads > 0 {
            bail!(
                "internal invariant fired: {} reads from lanes that produced no value",
                self.unread_lane_reads
            );
        }
        Ok(())
    }
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Render(c) => cmd_render(c),
        Cmd::SuccessMap(c) => cmd_success_map(c),
        Cmd::TexelBound(c) => cmd_texel_bound(c),
        Cmd::QualitySweep(c) => cmd_quality_sweep(c),
        Cmd::Convergence(c) => cmd_convergence(c),
        Cmd::FallbackEval(c) => cmd_fallback_eval(c),
        Cmd::DctBench(c) => cmd_dct_bench(c),
    }
}

fn cmd_render(c: RenderCmd) -> Result<()> {
    let scene = c.scene.scene()?;
    let mut cfg = FrameConfig::new(c.algo, c.fallback, c.filter.filter);
    cfg.resolution = c.scene.res;
    cfg.mask_width = c.filter.mask_width;
    cfg.seed = c.seed;
    cfg.spp = c.spp;
    cfg.coverage = c.scene.coverage;
    cfg.edge_remap = !c.no_edge_remap;
    cfg.force_fallback = c.force_fallback;
    cfg.validate().map_err(anyhow::Error::msg)?;

    let (img, stats) = render_frame(&cfg, &scene);
    write_ppm(&img, &c.out)?;
    if let Some(p) = &c.float_out {
        write_f32_dump(&img, p)?;
    }
    println!(
        "# ctf render algo={} fallback={} filter={} mask_width={} seed={} spp={} edge_remap={} force_fallback={} {}",
        algo_str(c.algo),
        fallback_str(c.fallback),
        filter_str(c.filter.filter),
        cfg.resolved_mask_width(),
        c.seed,
        c.spp,
        cfg.edge_remap,
        c.force_fallback,
        c.scene.describe()
    );
    println!(
        "texel_evals_per_pixel={:.4} perfect_wave_fraction={:.4} fallback_wave_fraction={:.4} covered_pixels={} unread_lane_diagnostics={} out={}",
        stats.texel_evals_per_pixel(),
        stats.perfect_wave_fraction(),
        stats.fallback_wave_fraction(),
        stats.covered_pixels,
        stats.unread_lane_reads,
        c.out.display()
    );
    let mut diag = Diagnostics::default();
    diag.absorb(&stats);
    diag.finish()
}

fn cmd_success_map(c: SuccessMapCmd) -> Result<()> {
    let scene = c.scene.scene()?;
    let rotations = grid(c.rot_start, c.rot_end, c.rot_step);
    let mags = grid(c.mag_start, c.mag_end, c.mag_step);
    let mask_width = c
        .filter
        .mask_width
        .unwrap_or(if c.filter.filter == FilterKind::Bilinear { 11 } else { 16 });

    let rows: Vec<String> = rotations
        .par_iter()
        .flat_map_iter(|&rot| {
            let scene = scene.reoriented(rot, 1.0);
            let coverage = c.scene.coverage;
            let res = c.scene.res;
            let filter = c.filter.filter;
            let tpl = c.texels_per_lane;
            mags.iter()
                .map(move |&mag| {
                    let p = probe_frame(
                        &scene.reoriented(rot, mag),
                        res,
                        filter,
                        &coverage,
                        mask_width,
                        tpl,
                    );
                    format!(
                        "{rot},{mag},{},{},{}",
                        (p.box_fallback_waves > 0) as u8,
                        (p.mask_fallback_waves > 0) as u8,
                        (p.list_fallback_waves > 0) as u8
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();

    let mut w = out_writer(&c.out)?;
    writeln!(
        w,
        "# ctf success-map filter={} mask_width={mask_width} texels_per_lane={} rot=[{},{},{}] mag=[{},{},{}] {}",
        filter_str(c.filter.filter),
        c.texels_per_lane,
        c.rot_start,
        c.rot_end,
        c.rot_step,
        c.mag_start,
        c.mag_end,
        c.mag_step,
        c.scene.describe()
    )?;
    writeln!(w, "rotation_deg,magnification,box_fallback,mask_fallback,list_fallback")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    Ok(())
}

fn cmd_texel_bound(c: TexelBoundCmd) -> Result<()> {
    let scene = c.scene.scene()?;
    let rotations = grid(c.rot_start, c.rot_end, c.rot_step);
    let maxima: Vec<(f64, u32)> = rotations
        .par_iter()
        .map(|&rot| {
            let p = probe_frame(
                &scene.reoriented(rot, c.scene.mag),
                c.scene.res,
                FilterKind::Bilinear,
                &c.scene.coverage,
                16,
                1,
            );
            (rot, p.max_unique_texels)
        })
        .collect();

    let global = maxima.iter().map(|(_, m)| *m).max().unwrap_or(0);
    let argmax: Vec<f64> = maxima
        .iter()
        .filter(|(_, m)| *m == global)
        .map(|(r, _)| *r)
        .collect();

    let mut w = out_writer(&c.out)?;
    writeln!(
        w,
        "# ctf texel-bound rot=[{},{},{}] {}",
        c.rot_start,
        c.rot_end,
        c.rot_step,
        c.scene.describe()
    )?;
    writeln!(w, "# max_unique_texels={global} at_rotations={argmax:?}")?;
    writeln!(w, "rotation_deg,max_unique_texels_per_wave")?;
    for (rot, m) in &maxima {
        writeln!(w, "{rot},{m}")?;
    }
    Ok(())
}

/// Ground-truth images for each magnification, shared across combos.
fn ground_truths(
    scene: &QuadScene<f32>,
    res: (u32, u32),
    coverage: Coverage,
    filter: FilterKind,
    rotation: f64,
    mags: &[f64],
) -> Vec<Image<f32>> {
    mags.par_iter()
        .map(|&m| {
            let mut cfg = FrameConfig::new(Algorithm::GroundTruth, FallbackKind::None, filter);
            cfg.resolution = res;
            cfg.coverage = coverage;
            let (img, _) = render_frame(&cfg, &scene.reoriented(rotation, m));
            img
        })
        .collect()
}

fn cmd_quality_sweep(c: QualitySweepCmd) -> Result<()> {
    let combos = parse_combos(&c.algos)?;
    let scene = c.scene.scene()?;
    let mags = grid(c.mag_start, c.mag_end, c.mag_step);
    let gts = ground_truths(
        &scene,
        c.scene.res,
        c.scene.coverage,
        c.filter.filter,
        c.scene.rotation,
        &mags,
    );

    let mut diag = Diagnostics::default();
    let mut w = out_writer(&c.out)?;
    writeln!(
        w,
        "# ctf quality-sweep algos={} filter={} frames={} seed={} spp={} mag=[{},{},{}] {}",
        c.algos,
        filter_str(c.filter.filter),
        c.frames,
        c.seed,
        c.spp,
        c.mag_start,
        c.mag_end,
        c.mag_step,
        c.scene.describe()
    )?;
    writeln!(w, "algo,fallback,magnification,psnr_db,max_error_255_mean")?;

    for (algo, fb) in combos {
        let mut all_mses = Vec::new();
        for (mi, &mag) in mags.iter().enumerate() {
            let sc = scene.reoriented(c.scene.rotation, mag);
            let results: Vec<(f64, f64, FrameStats)> = (0..c.frames)
                .into_par_iter()
                .map(|f| {
                    let mut cfg = FrameConfig::new(algo, fb, c.filter.filter);
                    cfg.resolution = c.scene.res;
                    cfg.mask_width = c.filter.mask_width;
                    cfg.coverage = c.scene.coverage;
                    cfg.seed = c.seed;
                    cfg.frame = f;
                    cfg.spp = c.spp;
                    let (img, stats) = render_frame(&cfg, &sc);
                    (
                        mse(&gts[mi].pixels, &img.pixels),
                        max_error_255(&gts[mi].pixels, &img.pixels),
                        stats,
                    )
                })
                .collect();
            let mses: Vec<f64> = results.iter().map(|r| r.0).collect();
            let max_err_mean =
                results.iter().map(|r| r.1).sum::<f64>() / results.len() as f64;
            for r in &results {
                diag.absorb(&r.2);
            }
            writeln!(
                w,
                "{},{},{mag},{:.6},{:.6}",
                algo_str(algo),
                fallback_str(fb),
                psnr_aggregate(&mses),
                max_err_mean
            )?;
            all_mses.extend(mses);
        }
        writeln!(
            w,
            "{},{},all,{:.6},",
            algo_str(algo),
            fallback_str(fb),
            psnr_aggregate(&all_mses)
        )?;
    }
    diag.finish()
}

fn cmd_convergence(c: ConvergenceCmd) -> Result<()> {
    let combos = parse_combos(&c.algos)?;
    let spps: Vec<u32> = c
        .spp_list
        .split(',')
        .map(|s| s.trim().parse().context("bad spp"))
        .collect::<Result<_>>()?;
    let scene = c.scene.scene()?;
    assert!(c.mag_count >= 1);
    let mags: Vec<f64> = (0..c.mag_count)
        .map(|i| {
            c.mag_start
                + (c.mag_end - c.mag_start) * i as f64 / (c.mag_count.max(2) - 1).max(1) as f64
        })
        .collect();
    let gts = ground_truths(
        &scene,
        c.scene.res,
        c.scene.coverage,
        c.filter.filter,
        c.scene.rotation,
        &mags,
    );

    let mut diag = Diagnostics::default();
    let mut w = out_writer(&c.out)?;
    writeln!(
        w,
        "# ctf convergence algos={} filter={} seed={} spp_list={} mags={mags:?} {}",
        c.algos,
        filter_str(c.filter.filter),
        c.seed,
        c.spp_list,
        c.scene.describe()
    )?;
    writeln!(w, "algo,fallback,spp,psnr_db")?;
    for (algo, fb) in combos {
        for &spp in &spps {
            let results: Vec<(f64, FrameStats)> = mags
                .par_iter()
                .enumerate()
                .map(|(mi, &mag)| {
                    let mut cfg = FrameConfig::new(algo, fb, c.filter.filter);
                    cfg.resolution = c.scene.res;
                    cfg.mask_width = c.filter.mask_width;
                    cfg.coverage = c.scene.coverage;
                    cfg.seed = c.seed;
                    cfg.spp = spp;
                    let (img, stats) = render_frame(&cfg, &scene.reoriented(c.scene.rotation, mag));
                    (mse(&gts[mi].pixels, &img.pixels), stats)
                })
                .collect();
            let mses: Vec<f64> = results.iter().map(|r| r.0).collect();
            for r in &results {
                diag.absorb(&r.1);
            }
            writeln!(
                w,
                "{},{},{spp},{:.6}",
                algo_str(algo),
                fallback_str(fb),
                psnr_aggregate(&mses)
            )?;
        }
    }
    diag.finish()
}

fn cmd_fallback_eval(c: FallbackEvalCmd) -> Result<()> {
    let fallbacks: Vec<FallbackKind> = c
        .fallbacks
        .split(',')
        .map(|s| parse_fallback(s.trim()).map_err(anyhow::Error::msg))
        .collect::<Result<_>>()?;
    let scene = c.scene.scene()?;
    let mags = grid(c.mag_start, c.mag_end, c.mag_step);
    let gts = ground_truths(
        &scene,
        c.scene.res,
        c.scene.coverage,
        c.filter.filter,
        c.scene.rotation,
        &mags,
    );

    let mut diag = Diagnostics::default();
    let mut w = out_writer(&c.out)?;
    writeln!(
        w,
        "# ctf fallback-eval fallbacks={} filter={} frames={} seed={} mag=[{},{},{}] force_fallback=true {}",
        c.fallbacks,
        filter_str(c.filter.filter),
        c.frames,
        c.seed,
        c.mag_start,
        c.mag_end,
        c.mag_step,
        c.scene.describe()
    )?;
    writeln!(w, "fallback,magnification,psnr_db,max_error_255_mean")?;
    for fb in fallbacks {
        for (mi, &mag) in mags.iter().enumerate() {
            let sc = scene.reoriented(c.scene.rotation, mag);
            let results: Vec<(f64, f64, FrameStats)> = (0..c.frames)
                .into_par_iter()
                .map(|f| {
                    let mut cfg = FrameConfig::new(Algorithm::Mask, fb, c.filter.filter);
                    cfg.resolution = c.scene.res;
                    cfg.mask_width = c.filter.mask_width;
                    cfg.coverage = c.scene.coverage;
                    cfg.seed = c.seed;
                    cfg.frame = f;
                    cfg.force_fallback = true;
                    let (img, stats) = render_frame(&cfg, &sc);
                    (
                        mse(&gts[mi].pixels, &img.pixels),
                        max_error_255(&gts[mi].pixels, &img.pixels),
                        stats,
                    )
                })
                .collect();
            let mses: Vec<f64> = results.iter().map(|r| r.0).collect();
            let max_err =
                results.iter().map(|r| r.1).sum::<f64>() / results.len() as f64;
            for r in &results {
                diag.absorb(&r.2);
            }
            writeln!(w, "{},{mag},{:.6},{:.6}", fallback_str(fb), psnr_aggregate(&mses), max_err)?;
        }
    }
    diag.finish()
}

fn cmd_dct_bench(c: DctBenchCmd) -> Result<()> {
    let scene = c.scene.scene()?;
    let dct = DctTexture::compress(&scene.diffuse);
    let map = PixelMap::new(&scene, c.scene.res);
    let (w_px, h_px) = c.scene.res;
    let tiles_x = (w_px + WAVE_TILE_W - 1) / WAVE_TILE_W;
    let tiles_y = (h_px + WAVE_TILE_H - 1) / WAVE_TILE_H;

    // Per-wave needed-texel histogram and work-unit accounting. The
    // baseline decodes each needed texel fully in one lane (critical path 3
    // channel-block transforms); the collaborative path gives each lane a
    // single channel block (critical path 1) whenever it applies.
    let mut histogram = std::collections::BTreeMap::<u32, (u64, u64)>::new();
    let mut baseline_critical = 0u64;
    let mut collab_critical = 0u64;
    let mut verified_waves = 0u64;
    let counters = CostCounters::default();
    let full_counters = CostCounters::default();

    for ty in 0..tiles_y {
        for tx in 0..tiles_x {
            let mut active = 0u32;
            let mut texels = std::collections::BTreeSet::new();
            for lane in 0..(WAVE_TILE_W * WAVE_TILE_H) {
                let px = tx * WAVE_TILE_W + lane % WAVE_TILE_W;
                let py = ty * WAVE_TILE_H + lane / WAVE_TILE_W;
                if px >= w_px || py >= h_px {
                    continue;
                }
                let p = ivec2(px as i32, py as i32);
                if !c.scene.coverage.covers(p, c.scene.res) {
                    continue;
                }
                active |= 1 << lane;
                let uv = map.uv(p);
                let fp = ctf_core::filters::footprint(
                    [uv[0] as f32, uv[1] as f32],
                    scene.diffuse.dims(),
                    FilterKind::Bilinear,
                );
                for tap in 0..fp.tap_count() {
                    texels.insert(fp.tap_coord(tap));
                }
            }
            if active == 0 {
                continue;
            }
            let wave = Wave::new(active);
            let needed: Vec<_> = texels.into_iter().collect();
            let n = needed.len() as u32;
            baseline_critical += 3;

            let collaborative = n as usize <= COLLABORATIVE_MAX_TEXELS
                && wave.lanes_lower_than_count_active(3 * n);
            if collaborative {
                collab_critical += 1;
                // Run the real decode occasionally and check it against the
                // sequential full decode.
                if verified_waves < 64 {
                    let out = collaborative_dct_produce(&wave, &needed, &dct, &counters)
                        .expect("qualifying wave");
                    for (i, &t) in needed.iter().enumerate() {
                        let full = dct.decode_texel(t, &full_counters);
                        assert_eq!(out.get(i as u32), full, "collaborative decode mismatch");
                    }
                    verified_waves += 1;
                }
            } else {
                collab_critical += 3;
            }
            let e = histogram.entry(n).or_insert((0, 0));
            e.0 += 1;
            e.1 += collaborative as u64;
        }
    }

    let mut w = out_writer(&c.out)?;
    writeln!(w, "# ctf dct-bench filter=bilinear {}", c.scene.describe())?;
    writeln!(
        w,
        "# baseline_critical_work_units={baseline_critical} collaborative_critical_work_units={collab_critical} reduction_factor={:.3} verified_waves={verified_waves}",
        baseline_critical as f64 / collab_critical as f64
    )?;
    writeln!(w, "needed_texels,waves,collaborative_waves")?;
    for (n, (waves, collab)) in &histogram {
        writeln!(w, "{n},{waves},{collab}")?;
    }
    Ok(())
}
