//! Scene configuration files (JSON, SI units).

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AcquisitionGeometry, PointTarget, RadarParams, SPEED_OF_LIGHT};
use crate::interp::InterpKernel;
use crate::rangeproc::{fast_time_of, RangeGrid, ScaledConstants};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    /// Along-track distance from the scene centre.
    pub x_m: f64,
    /// Great-circle distance across track from the scene centre; positive is
    /// farther from the radar.
    pub ground_offset_m: f64,
    #[serde(default = "unit_amplitude")]
    pub amplitude: [f64; 2],
}

fn unit_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Start of the fast-time window; centred on `2·r_ref/c` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_range_start_s: Option<f64>,
    pub image_range_samples: usize,
    /// Slant-range depth of the scene the image grid must hold.
    pub scene_depth_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub radar: RadarParams,
    pub geometry: AcquisitionGeometry,
    #[serde(default)]
    pub targets: Vec<TargetSpec>,
    pub grids: GridSpec,
    #[serde(default)]
    pub kernel: InterpKernel,
    /// Reserved; the simulator is deterministic.
    #[serde(default)]
    pub seed: u64,
}

/// Everything the focusing chain needs to know about an acquisition. Stored
/// alongside raw rasters so they can be focused without the scene file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Acquisition {
    pub radar: RadarParams,
    pub geometry: AcquisitionGeometry,
    pub raw_range_start_s: f64,
    pub image_grid: RangeGrid,
    pub kernel: InterpKernel,
}

impl SceneConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SceneConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Json(j) => Error::Format {
                path: path.into(),
                reason: j.to_string(),
            },
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.radar.validate(&self.geometry)?;
        self.kernel.validate()?;
        let g = &self.grids;
        let n = g.image_range_samples;
        if n < 2 || n % 2 != 0 {
            return Err(Error::validation(
                "grids.image_range_samples",
                format!("{n} must be even and >= 2"),
            ));
        }
        if !(g.scene_depth_m.is_finite() && g.scene_depth_m > 0.0) {
            return Err(Error::validation("grids.scene_depth_m", "must be finite and > 0"));
        }
        for (i, t) in self.targets.iter().enumerate() {
            if !(t.x_m.is_finite() && t.ground_offset_m.is_finite())
                || !t.amplitude.iter().all(|a| a.is_finite())
            {
                return Err(Error::validation(format!("targets[{i}]"), "non-finite value"));
            }
            if t.x_m.abs() >= self.geometry.earth_radius {
                return Err(Error::validation(format!("targets[{i}].x_m"), "off the sphere"));
            }
        }
        self.check_sampling()?;
        self.check_window()
    }

    /// The t̄_r grid must sample the scaled bandwidth plus the spectral
    /// offset of targets away from the reference range.
    fn check_sampling(&self) -> Result<()> {
        let grid = self.image_grid();
        let sc = ScaledConstants::new(&self.radar, &self.geometry)?;
        let half = 0.5 * self.grids.scene_depth_m;
        let r = self.geometry.reference_range;
        let off = ScaledConstants::spectral_offset(&self.radar, &self.geometry, r + half)
            .abs()
            .max(ScaledConstants::spectral_offset(&self.radar, &self.geometry, r - half).abs());
        let need = sc.br_bar + 2.0 * off;
        let rate = 1.0 / grid.step;
        if rate < need {
            return Err(Error::validation(
                "grids.image_range_samples",
                format!(
                    "resampled range rate {rate:.4e} Hz is below the {need:.4e} Hz needed for \
                     the scaled bandwidth over a {} m scene; raise image_range_samples or reduce scene_depth_m",
                    self.grids.scene_depth_m
                ),
            ));
        }
        Ok(())
    }

    fn check_window(&self) -> Result<()> {
        let grid = self.image_grid();
        let start = self.raw_range_start();
        let fs = self.radar.sample_rate;
        let margin = (self.kernel.taps / 2) as f64 / fs;
        let win_hi = start + (self.radar.range_samples - 1) as f64 / fs;
        let lo = fast_time_of(&self.geometry, grid.last());
        let hi = fast_time_of(&self.geometry, grid.origin);
        if lo - margin < start || hi + margin > win_hi {
            return Err(Error::validation(
                "grids.scene_depth_m",
                format!(
                    "image grid needs fast time [{lo:.9e}, {hi:.9e}] s plus kernel margin, \
                     raw window is [{start:.9e}, {win_hi:.9e}] s"
                ),
            ));
        }
        Ok(())
    }

    pub fn raw_range_start(&self) -> f64 {
        self.grids.raw_range_start_s.unwrap_or_else(|| {
            2.0 * self.geometry.reference_range / SPEED_OF_LIGHT
                - (self.radar.range_samples / 2) as f64 / self.radar.sample_rate
        })
    }

    /// Resampled-range grid centred on the scene centre's `u`, spanning the
    /// scene depth plus 10%.
    pub fn image_grid(&self) -> RangeGrid {
        let g = &self.geometry;
        let n = self.grids.image_range_samples;
        let u_ref = g.projection_from_range(g.reference_range);
        let u_span = 1.1 * self.grids.scene_depth_m * g.reference_range / g.orbit_radius;
        let step = 2.0 * (u_span / n as f64) / SPEED_OF_LIGHT;
        RangeGrid {
            origin: 2.0 * u_ref / SPEED_OF_LIGHT - (n / 2) as f64 * step,
            step,
            count: n,
        }
    }

    pub fn targets(&self) -> Vec<PointTarget> {
        self.targets
            .iter()
            .map(|t| {
                self.geometry.target_on_sphere(
                    t.x_m,
                    t.ground_offset_m,
                    Complex64::new(t.amplitude[0], t.amplitude[1]),
                )
            })
            .collect()
    }

    pub fn acquisition(&self) -> Acquisition {
        Acquisition {
            radar: self.radar.clone(),
            geometry: self.geometry.clone(),
            raw_range_start_s: self.raw_range_start(),
            image_grid: self.image_grid(),
            kernel: self.kernel,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
      "radar": {"carrier_frequency_hz": 5.4e9, "bandwidth_hz": 40e6, "prf_hz": 1350,
                "sample_rate_hz": 80e6, "pulses": 256, "range_samples": 4096},
      "geometry": {"orbit_radius_m": 6903000, "earth_radius_m": 6371000,
                   "centre_orbit_radius_m": 6903000, "reference_range_m": 597000,
                   "speed_mps": 7500, "mode": "stripmap", "acquisition_time_s": 0.18,
                   "dwell_time_s": 0.1, "scene_range_m": 597000},
      "targets": [{"x_m": 0, "ground_offset_m": 0}],
      "grids": {"image_range_samples": 4096, "scene_depth_m": 5500}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = SceneConfig::from_json(SAMPLE).unwrap();
        assert_eq!(cfg.kernel, InterpKernel::default());
        let a = cfg.to_json();
        let b = SceneConfig::from_json(&a).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn field_level_errors() {
        let bad = SAMPLE.replace("\"prf_hz\": 1350", "\"prf_hz\": -1");
        let err = SceneConfig::from_json(&bad).unwrap_err();
        assert!(err.to_string().contains("radar.prf_hz"), "{err}");
        assert_eq!(err.exit_code(), 2);

        let deep = SAMPLE.replace("5500", "9000");
        let err = SceneConfig::from_json(&deep).unwrap_err();
        assert!(err.to_string().contains("grids"), "{err}");

        let unknown = SAMPLE.replace("\"seed\"", "x").replace("\"targets\"", "\"targetz\"");
        assert!(matches!(SceneConfig::from_json(&unknown), Err(Error::Json(_))));
    }

    #[test]
    fn image_grid_is_centred_on_scene() {
        let cfg = SceneConfig::from_json(SAMPLE).unwrap();
        let grid = cfg.image_grid();
        let centre = grid.origin + 2048.0 * grid.step;
        let u = 0.5 * SPEED_OF_LIGHT * centre;
        let r = cfg.geometry.range_from_projection(u);
        assert!((r - 597_000.0).abs() < 1e-3);
    }
}
