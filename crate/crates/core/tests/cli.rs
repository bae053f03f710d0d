mod common;

use std::path::Path;
use std::process::{Command, Output};

use sga_core::config::SceneConfig;
use sga_core::echosim::simulate_echo;
use sga_core::geometry::Mode;
use sga_core::report::AnalysisReport;
use sga_core::sgar;

fn sga(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sga"));
    cmd.args(args).env_remove("SGA_THREADS");
    if let Some(t) = threads {
        cmd.env("SGA_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn write_config(dir: &Path, name: &str, cfg: &SceneConfig) -> String {
    let p = dir.join(name);
    std::fs::write(&p, cfg.to_json()).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn simulate_focus_analyze_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    let cfg = common::tiny_scene(&[(0.0, 0.0), (60.0, 100.0)]);
    let c = write_config(dir.path(), "scene.json", &cfg);

    ok(&sga(&["simulate", "--config", &c, "--out", &d("raw")], None));
    let raw = sgar::read(d("raw")).unwrap();
    let mem = simulate_echo(&cfg.targets(), &cfg.radar, &cfg.geometry, cfg.raw_range_start()).unwrap();
    assert_eq!(raw.raster, mem);
    assert_eq!(raw.acquisition, Some(cfg.acquisition()));

    for algo in ["extended", "classic"] {
        let img = d(&format!("{algo}.sgar"));
        ok(&sga(&["focus", "--in", &d("raw"), "--algo", algo, "--out", &img], None));
        let report = d(&format!("{algo}.json"));
        ok(&sga(&["analyze", "--in", &img, "--config", &c, "--report", &report], None));
        let rep: AnalysisReport = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(rep.targets.len(), 2);
        for t in &rep.targets {
            let irf = t.irf.as_ref().expect("peak found");
            assert!((irf.peak_xy.0 - t.expected_xy.0).abs() < 0.25 * rep.resolution_az_m.unwrap());
            assert!((irf.peak_xy.1 - t.expected_xy.1).abs() < 0.25 * rep.resolution_rg_m);
        }
    }

    let png = d("q.png");
    ok(&sga(&["quicklook", "--in", &d("extended"), "--png", &png], None));
    assert!(std::fs::metadata(&png).unwrap().len() > 0);

    let out = sga(&["compare", "--a", &d("extended"), "--b", &d("extended")], None);
    ok(&out);
    let stats: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stats["max_abs_diff"], 0.0);
    assert_eq!(stats["bitwise_equal"], true);
}

#[test]
fn focus_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    let c = write_config(dir.path(), "s.json", &common::tiny_scene(&[(0.0, 0.0), (-40.0, -80.0)]));
    ok(&sga(&["simulate", "--config", &c, "--out", &d("raw")], None));
    for (n, name) in [("1", "one"), ("3", "three"), ("0", "auto")] {
        ok(&sga(&["focus", "--in", &d("raw"), "--out", &d(name)], Some(n)));
    }
    for other in ["three", "auto"] {
        let out = sga(&["compare", "--a", &d("one"), "--b", &d(other)], None);
        ok(&out);
        let stats: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(stats["bitwise_equal"], true, "{other}");
    }
}

#[test]
fn empty_scene_gives_zero_raster_and_zero_image() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    let cfg = common::tiny_scene(&[]);
    let c = write_config(dir.path(), "e.json", &cfg);
    ok(&sga(&["simulate", "--config", &c, "--out", &d("raw")], None));
    let raw = sgar::read(d("raw")).unwrap().raster;
    assert_eq!(raw.dims(), [cfg.radar.pulses, cfg.radar.range_samples]);
    assert_eq!(raw.max_abs(), 0.0);
    ok(&sga(&["focus", "--in", &d("raw"), "--out", &d("img")], None));
    assert_eq!(sgar::read(d("img")).unwrap().raster.max_abs(), 0.0);
}

#[test]
fn spotlight_extended_falls_back_with_notice() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    let mut cfg = common::tiny_scene(&[(0.0, 0.0)]);
    cfg.geometry.mode = Mode::Spotlight;
    cfg.geometry.dwell_time = cfg.geometry.acquisition_time;
    let c = write_config(dir.path(), "spot.json", &cfg);
    ok(&sga(&["simulate", "--config", &c, "--out", &d("raw")], None));
    let out = sga(&["focus", "--in", &d("raw"), "--algo", "extended", "--out", &d("img")], None);
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("classic"));
    let img = sgar::read(d("img")).unwrap();
    assert_eq!(img.image.unwrap().algo, sga_core::azcomp::Algo::Classic);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();

    let bad = common::tiny_scene(&[]).to_json().replace("\"prf_hz\": 1350.0", "\"prf_hz\": -5.0");
    std::fs::write(d("bad.json"), bad).unwrap();
    let out = sga(&["simulate", "--config", &d("bad.json"), "--out", &d("x")], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radar.prf_hz"));

    let out = sga(&["focus", "--in", &d("missing"), "--out", &d("y")], None);
    assert_eq!(out.status.code(), Some(1));

    let c = write_config(dir.path(), "ok.json", &common::tiny_scene(&[(0.0, 0.0)]));
    ok(&sga(&["simulate", "--config", &c, "--out", &d("raw")], None));
    let out = sga(&["analyze", "--in", &d("raw"), "--config", &c, "--report", &d("r.json")], None);
    assert_eq!(out.status.code(), Some(2), "raw data is not an image");

    let out = sga(&["focus", "--in", &d("raw"), "--out", &d("img")], Some("lots"));
    assert_eq!(out.status.code(), Some(2));

    // A target placed where the image has nothing: the report is still
    // written and the missing peak is a numerical failure.
    ok(&sga(&["focus", "--in", &d("raw"), "--out", &d("img")], None));
    let elsewhere = write_config(dir.path(), "far.json", &common::tiny_scene(&[(0.0, 0.0), (250.0, 200.0)]));
    let out = sga(&["analyze", "--in", &d("img"), "--config", &elsewhere, "--report", &d("r.json")], None);
    assert_eq!(out.status.code(), Some(3), "{}", std::fs::read_to_string(d("r.json")).unwrap());
    let rep: AnalysisReport = serde_json::from_str(&std::fs::read_to_string(d("r.json")).unwrap()).unwrap();
    assert_eq!(rep.missing(), 1);
}
