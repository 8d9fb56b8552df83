//! End-to-end checks of the experiment driver binary.

use std::path::PathBuf;
use std::process::Command;

fn ctf() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ctf"))
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("ctf_cli_tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn render_writes_ppm_and_reports_stats() {
    let out = temp_path("render.ppm");
    let float_out = temp_path("render.f32");
    let output = ctf()
        .args([
            "render",
            "--algo",
            "mask",
            "--fallback",
            "c-plus",
            "--rotation",
            "45",
            "--mag",
            "3.0",
            "--res",
            "64x32",
            "--tex-size",
            "128",
            "--out",
        ])
        .arg(&out)
        .arg("--float-out")
        .arg(&float_out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.starts_with("# ctf render"), "missing config header: {stdout}");
    assert!(stdout.contains("texel_evals_per_pixel="));
    assert!(stdout.contains("unread_lane_diagnostics=0"));

    let ppm = std::fs::read(&out).unwrap();
    assert!(ppm.starts_with(b"P6\n64 32\n255\n"));
    assert_eq!(ppm.len(), 15 + 64 * 32 * 3);

    let dump = ctf_core::io::read_f32_dump(&float_out).unwrap();
    assert_eq!((dump.width, dump.height), (64, 32));
}

#[test]
fn render_is_deterministic_across_invocations() {
    let a = temp_path("det_a.f32");
    let b = temp_path("det_b.f32");
    for p in [&a, &b] {
        let status = ctf()
            .args([
                "render", "--algo", "box", "--fallback", "c", "--mag", "1.2", "--res", "64x32",
                "--tex-size", "128", "--seed", "9", "--out",
            ])
            .arg(temp_path("det.ppm"))
            .arg("--float-out")
            .arg(p)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn success_map_emits_grid_csv() {
    let output = ctf()
        .args([
            "success-map",
            "--res",
            "64x32",
            "--tex-size",
            "64",
            "--rot-step",
            "30",
            "--mag-start",
            "1.0",
            "--mag-end",
            "2.0",
            "--mag-step",
            "0.5",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    let mut lines = stdout.lines();
    assert!(lines.next().unwrap().starts_with("# ctf success-map"));
    assert_eq!(
        lines.next().unwrap(),
        "rotation_deg,magnification,box_fallback,mask_fallback,list_fallback"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4 * 3); // rotations {0,30,60,90} x mags {1.0,1.5,2.0}
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 5);
        for flag in &cols[2..] {
            assert!(*flag == "0" || *flag == "1");
        }
    }
}

#[test]
fn texel_bound_reports_maximum() {
    let out = temp_path("bound.csv");
    let status = ctf()
        .args([
            "texel-bound",
            "--mag",
            "1.0",
            "--res",
            "256x256",
            "--tex-size",
            "64",
            "--rot-start",
            "25",
            "--rot-end",
            "35",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("# max_unique_texels="));
    assert!(csv.contains("rotation_deg,max_unique_texels_per_wave"));
    // 30 degrees at unit magnification needs more than a wave of texels.
    let max: u32 = csv
        .lines()
        .find(|l| l.starts_with("# max_unique_texels="))
        .and_then(|l| l.split('=').nth(1))
        .and_then(|v| v.split_whitespace().next())
        .unwrap()
        .parse()
        .unwrap();
    assert!(max > 32 && max <= 54);
}

#[test]
fn quality_sweep_and_convergence_emit_rows() {
    let output = ctf()
        .args([
            "quality-sweep",
            "--res",
            "64x32",
            "--tex-size",
            "128",
            "--algos",
            "mask:c,one-tap",
            "--mag-start",
            "1.2",
            "--mag-end",
            "1.6",
            "--mag-step",
            "0.4",
            "--frames",
            "2",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("algo,fallback,magnification,psnr_db,max_error_255_mean"));
    // 2 combos x (2 mags + 1 aggregate row)
    assert_eq!(stdout.lines().filter(|l| !l.starts_with('#') && !l.starts_with("algo,")).count(), 6);

    let output = ctf()
        .args([
            "convergence",
            "--res",
            "64x32",
            "--tex-size",
            "128",
            "--algos",
            "one-tap",
            "--spp-list",
            "1,4",
            "--mag-count",
            "2",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("algo,fallback,spp,psnr_db"));
}

#[test]
fn fallback_eval_forces_every_wave() {
    let output = ctf()
        .args([
            "fallback-eval",
            "--res",
            "64x32",
            "--tex-size",
            "128",
            "--fallbacks",
            "c,c-plus",
            "--mag-start",
            "2.0",
            "--mag-end",
            "3.0",
            "--mag-step",
            "1.0",
            "--frames",
            "2",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("force_fallback=true"));
    assert!(stdout.contains("fallback,magnification,psnr_db,max_error_255_mean"));
}

#[test]
fn dct_bench_reports_reduction() {
    let output = ctf()
        .args([
            "dct-bench",
            "--res",
            "128x64",
            "--tex-size",
            "64",
            "--mag",
            "16",
            "--rotation",
            "30",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    let line = stdout
        .lines()
        .find(|l| l.starts_with("# baseline_critical_work_units="))
        .expect("summary line");
    let reduction: f64 = line
        .split("reduction_factor=")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(reduction >= 2.5);
    assert!(stdout.contains("needed_texels,waves,collaborative_waves"));
}

#[test]
fn invalid_config_is_rejected() {
    let output = ctf()
        .args(["render", "--algo", "one-tap", "--filter", "catmull-rom", "--res", "32x16"])
        .output()
        .unwrap();
    assert!(!output.status.success());
}
