#![allow(dead_code)]

use std::path::PathBuf;

use sga_core::config::{SceneConfig, TargetSpec};

pub fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

pub fn load(name: &str) -> SceneConfig {
    SceneConfig::load(config_path(name)).expect("shipped config loads")
}

pub fn with_targets(mut cfg: SceneConfig, targets: &[(f64, f64)]) -> SceneConfig {
    cfg.targets = targets
        .iter()
        .map(|&(x, g)| TargetSpec {
            x_m: x,
            ground_offset_m: g,
            amplitude: [1.0, 0.0],
        })
        .collect();
    cfg
}

/// Stripmap desk scene with a centre target and one whose azimuth tone lies
/// beyond PRF/2.
pub fn alias_scene() -> SceneConfig {
    with_targets(load("stripmap_desk.json"), &[(0.0, 0.0), (2_500.0, 0.0)])
}

/// Small stripmap scene that focuses in well under a second.
pub fn tiny_scene(targets: &[(f64, f64)]) -> SceneConfig {
    let text = r#"{
      "radar": {"carrier_frequency_hz": 5.4e9, "bandwidth_hz": 5e6, "prf_hz": 1350,
                "sample_rate_hz": 10e6, "pulses": 128, "range_samples": 128},
      "geometry": {"orbit_radius_m": 6903000, "earth_radius_m": 6371000,
                   "centre_orbit_radius_m": 6903000, "reference_range_m": 597000,
                   "speed_mps": 7500, "mode": "stripmap", "acquisition_time_s": 0.09,
                   "dwell_time_s": 0.05, "scene_range_m": 597000},
      "grids": {"image_range_samples": 256, "scene_depth_m": 500}
    }"#;
    with_targets(SceneConfig::from_json(text).expect("tiny scene validates"), targets)
}
