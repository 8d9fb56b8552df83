//! Development scratchpad: sweeps the parameter ranges the acceptance checks
//! pin down, to see where the thresholds actually fall in this simulator.

use ctf_core::filters::FilterKind;
use ctf_core::render::{probe_frame, render_frame, Algorithm, FallbackKind, FrameConfig};
use ctf_core::scene::{Coverage, QuadScene};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    let base = QuadScene::<f32>::procedural(0.0, 1.0, 64, 1);

    if which == "bilinear" || which == "all" {
        println!("== bilinear zero-fallback thresholds (512x512, rotations 0..90) ==");
        for mag in [1.55, 1.59, 1.60, 1.65, 2.30, 2.35, 2.36, 2.40] {
            let mut worst_mask = 0u64;
            let mut worst_box = 0u64;
            let mut worst_box_rot = 0;
            for rot in 0..=90 {
                let scene = base.reoriented(rot as f64, mag);
                let p = probe_frame(&scene, (512, 512), FilterKind::Bilinear, &Coverage::Full, 16, 1);
                if p.box_fallback_waves > 0 {
                    worst_box += p.box_fallback_waves;
                    worst_box_rot = rot;
                }
                worst_mask += p.mask_fallback_waves;
            }
            println!(
                "mag {mag:.2}: mask fallback waves {worst_mask}, box fallback waves {worst_box} (last rot {worst_box_rot})"
            );
        }
        // Box at exactly 45 deg / 2.30
        let scene = base.reoriented(45.0, 2.30);
        let p = probe_frame(&scene, (512, 512), FilterKind::Bilinear, &Coverage::Full, 16, 1);
        println!("box @45deg mag 2.30: fallback waves {}", p.box_fallback_waves);
    }

    if which == "texels" || which == "all" {
        println!("== unique texel bound at magnification 1.0 ==");
        let mut global_max = 0;
        let mut argmax = 0;
        for rot in 0..=90 {
            let scene = base.reoriented(rot as f64, 1.0);
            let p = probe_frame(&scene, (512, 512), FilterKind::Bilinear, &Coverage::Full, 16, 1);
            if p.max_unique_texels > global_max {
                global_max = p.max_unique_texels;
                argmax = rot;
            }
            if rot % 10 == 0 || (29..=31).contains(&rot) {
                println!("rot {rot:2}: max unique {}", p.max_unique_texels);
            }
        }
        println!("global max {global_max} at rot {argmax}");
    }

    if which == "bicubic" || which == "all" {
        println!("== bicubic mask fallback counts at 512x512 ==");
        for mag in [3.0, 3.2, 3.5, 3.7, 4.0, 4.5, 5.0] {
            let mut total = 0u64;
            let mut worst_rot = 0;
            let mut worst = 0u64;
            for rot in 0..=90 {
                let scene = base.reoriented(rot as f64, mag);
                let p =
                    probe_frame(&scene, (512, 512), FilterKind::CatmullRom, &Coverage::Full, 16, 1);
                total += p.mask_fallback_waves;
                if p.mask_fallback_waves > worst {
                    worst = p.mask_fallback_waves;
                    worst_rot = rot;
                }
            }
            println!("mag {mag:.2}: total mask fallbacks {total} (worst rot {worst_rot}: {worst})");
        }
        for rot in [0, 15, 30, 45, 60, 75, 90] {
            let scene = base.reoriented(rot as f64, 3.0);
            let p = probe_frame(&scene, (512, 512), FilterKind::CatmullRom, &Coverage::Full, 16, 1);
            println!("mag 3.0 rot {rot}: mask fallbacks {}", p.mask_fallback_waves);
        }
    }

    if which == "bicubic2" {
        println!("== bicubic threshold search ==");
        for mag in [5.5, 6.0, 6.5, 7.0, 7.5, 8.0] {
            let mut total = 0u64;
            for rot in 0..=90 {
                let scene = base.reoriented(rot as f64, mag);
                let p =
                    probe_frame(&scene, (512, 512), FilterKind::CatmullRom, &Coverage::Full, 16, 1);
                total += p.mask_fallback_waves;
            }
            println!("mag {mag:.2}: total mask fallbacks {total}");
        }
        println!("== bicubic with 2 texels per lane at mag 3.0 ==");
        let mut total = 0u64;
        for rot in 0..=90 {
            let scene = base.reoriented(rot as f64, 3.0);
            let p = probe_frame(&scene, (512, 512), FilterKind::CatmullRom, &Coverage::Full, 16, 2);
            total += p.mask_fallback_waves;
        }
        println!("tpl=2 mag 3.0: total mask fallbacks {total}");
    }

    if which == "quality" {
        use ctf_core::metrics::{mse, psnr_aggregate};
        let t0 = std::time::Instant::now();
        let tex_seed: u64 = std::env::args().nth(3).and_then(|a| a.parse().ok()).unwrap_or(33);
        let scene_base = QuadScene::<f32>::procedural(45.0, 1.0, 1024, tex_seed);
        let mags: Vec<f64> = (0..8).map(|i| 1.0 + 0.2 * i as f64).collect();
        let frames: u32 = std::env::args().nth(2).and_then(|a| a.parse().ok()).unwrap_or(12);
        let res = (512u32, 512u32);
        let combos: &[(&str, Algorithm, FallbackKind)] = &[
            ("mask-cplus", Algorithm::Mask, FallbackKind::CPlus),
            ("box-cplus", Algorithm::Box, FallbackKind::CPlus),
            ("box-c", Algorithm::Box, FallbackKind::C),
            ("box-wavecomm", Algorithm::Box, FallbackKind::WaveComm),
            ("wavecomm", Algorithm::WaveComm, FallbackKind::None),
            ("onetap", Algorithm::OneTap, FallbackKind::None),
        ];
        // Ground truth once per magnification.
        let gts: Vec<_> = mags.iter().map(|&m| {
            let sc = scene_base.reoriented(45.0, m);
            let mut cfg = FrameConfig::new(Algorithm::GroundTruth, FallbackKind::None, FilterKind::Bilinear);
            cfg.resolution = res;
            render_frame(&cfg, &sc).0
        }).collect();
        for (name, algo, fb) in combos {
            let mut mses = Vec::new();
            for (mi, &m) in mags.iter().enumerate() {
                let sc = scene_base.reoriented(45.0, m);
                for f in 0..frames {
                    let mut cfg = FrameConfig::new(*algo, *fb, FilterKind::Bilinear);
                    cfg.resolution = res;
                    cfg.seed = 7;
                    cfg.frame = f;
                    let (img, _) = render_frame(&cfg, &sc);
                    mses.push(mse(&gts[mi].pixels, &img.pixels));
                }
            }
            let per_mag: Vec<String> = mses
                .chunks(frames as usize)
                .map(|c| format!("{:.2e}", c.iter().sum::<f64>() / c.len() as f64))
                .collect();
            println!("{name}: aggregate {:.3} dB  per-mag {:?}", psnr_aggregate(&mses), per_mag);
        }
        println!("quality took {:?} ({frames} frames/mag)", t0.elapsed());
    }

    if which == "convergence" {
        use ctf_core::metrics::{mse, psnr_aggregate};
        let t0 = std::time::Instant::now();
        let scene_base = QuadScene::<f32>::procedural(45.0, 1.0, 1024, 33);
        let mags = [1.0, 1.375, 1.75, 2.125, 2.5];
        let res = (256u32, 256u32);
        let combos: &[(&str, Algorithm, FallbackKind)] = &[
            ("onetap", Algorithm::OneTap, FallbackKind::None),
            ("wavecomm", Algorithm::WaveComm, FallbackKind::None),
            ("box-cplus", Algorithm::Box, FallbackKind::CPlus),
            ("mask-cplus", Algorithm::Mask, FallbackKind::CPlus),
        ];
        let gts: Vec<_> = mags.iter().map(|&m| {
            let sc = scene_base.reoriented(45.0, m);
            let mut cfg = FrameConfig::new(Algorithm::GroundTruth, FallbackKind::None, FilterKind::Bilinear);
            cfg.resolution = res;
            render_frame(&cfg, &sc).0
        }).collect();
        for (name, algo, fb) in combos {
            print!("{name}:");
            for spp in [1u32, 4, 16, 64, 256] {
                let mut mses = Vec::new();
                for (mi, &m) in mags.iter().enumerate() {
                    let sc = scene_base.reoriented(45.0, m);
                    let mut cfg = FrameConfig::new(*algo, *fb, FilterKind::Bilinear);
                    cfg.resolution = res;
                    cfg.seed = 11;
                    cfg.spp = spp;
                    let (img, _) = render_frame(&cfg, &sc);
                    mses.push(mse(&gts[mi].pixels, &img.pixels));
                }
                print!(" {spp}:{:.2}", psnr_aggregate(&mses));
            }
            println!();
        }
        println!("convergence took {:?}", t0.elapsed());
    }

    if which == "circle" || which == "all" {
        println!("== circle coverage at mag 3.0: per-wave (k, n) feasibility scan ==");
        // For each radius, check every covered wave: with remapping, mask
        // sampling succeeds iff unique texels n <= active lanes k. Without
        // remapping it needs lanes 0..n-1 all active.
        for rot in [0.0f64, 25.0, 45.0] {
            let scene = base.reoriented(rot, 3.0);
            let mut clean = Vec::new();
            for r4 in (250 * 4)..(362 * 4) {
                let radius = r4 as f64 / 4.0;
                let cov = Coverage::Circle { radius };
                let p = probe_frame(&scene, (512, 512), FilterKind::Bilinear, &cov, 16, 1);
                if p.mask_fallback_waves == 0 {
                    clean.push(radius);
                }
            }
            println!(
                "rot {rot}: {} clean radii of 448 scanned; first: {:?} last: {:?}",
                clean.len(),
                &clean[..clean.len().min(8)],
                &clean[clean.len().saturating_sub(4)..]
            );
            // Verify one with full renders (remap on: zero fallbacks; off: some).
            if let Some(&radius) = clean.first() {
                let render_scene = QuadScene::<f32>::procedural(rot, 3.0, 1024, 1);
                let mut cfg = FrameConfig::new(Algorithm::Mask, FallbackKind::C, FilterKind::Bilinear);
                cfg.resolution = (512, 512);
                cfg.coverage = Coverage::Circle { radius };
                let (_, on) = render_frame(&cfg, &render_scene);
                let mut off = cfg.clone();
                off.edge_remap = false;
                let (_, s_off) = render_frame(&off, &render_scene);
                println!(
                    "  radius {radius}: remap-on fallbacks {}, remap-off fallbacks {}",
                    on.fallback_waves, s_off.fallback_waves
                );
            }
        }
    }
}
