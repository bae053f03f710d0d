//! Per-target focus reports and raster comparison.

use serde::{Deserialize, Serialize};

use crate::analysis::{irf_metrics, predict_alias_position, IrfReport};
use crate::azcomp::{Algo, FocusedImage};
use crate::config::SceneConfig;
use crate::error::{Error, Result};
use crate::geometry::{Mode, SPEED_OF_LIGHT};
use crate::raster::ComplexRaster;
use crate::rangeproc::ScaledConstants;

/// Half-size of the peak search window, in pixels.
pub const SEARCH_CELLS: usize = 12;
/// A peak counts as found only if it is within this many dB of the level
/// its configured amplitude implies relative to the strongest pixel.
/// Sidelobes of other targets sit well below it.
pub const PEAK_MARGIN_DB: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub x_m: f64,
    pub ground_offset_m: f64,
    /// Where the target should appear in image coordinates. For classic
    /// images this is the aliased position.
    pub expected_xy: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub irf: Option<IrfReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub algo: Algo,
    pub mode: Mode,
    /// Theoretical −3 dB widths `0.886·v/(k_t·T_u)` and `0.886·c/(2B̄_r)`.
    /// The azimuth value is absent in spotlight mode.
    pub resolution_az_m: Option<f64>,
    pub resolution_rg_m: f64,
    pub targets: Vec<TargetReport>,
}

impl AnalysisReport {
    pub fn missing(&self) -> usize {
        self.targets.iter().filter(|t| t.irf.is_none()).count()
    }
}

pub fn analyze(img: &FocusedImage, cfg: &SceneConfig) -> Result<AnalysisReport> {
    let g = &cfg.geometry;
    let sc = ScaledConstants::new(&cfg.radar, g)?;
    let resolution_az_m = g
        .doppler_centroid_rate(cfg.radar.wavelength())
        .ok()
        .map(|k_t| 0.886 * g.speed / (k_t * g.dwell_time));
    let img_max = img.raster.max_abs();
    let amp_max = cfg.targets.iter().map(|t| t.amplitude[0].hypot(t.amplitude[1])).fold(0.0, f64::max);
    let targets = cfg
        .targets
        .iter()
        .zip(cfg.targets())
        .map(|(spec, t)| {
            let x = match img.meta.algo {
                Algo::Classic => predict_alias_position(t.x(), g, &cfg.radar, &sc),
                _ => t.x() * img.meta.x_scale,
            };
            let expected_xy = (x, t.y());
            let floor = img_max * spec.amplitude[0].hypot(spec.amplitude[1]) / amp_max
                * 10f64.powf(-PEAK_MARGIN_DB / 20.0);
            let (irf, error) = match irf_metrics(img, expected_xy, SEARCH_CELLS) {
                Ok(r) if r.peak_mag >= floor => (Some(r), None),
                Ok(r) => (
                    None,
                    Some(format!(
                        "strongest local maximum near the expected position is {:.1} dB below the image peak",
                        20.0 * (img_max / r.peak_mag).log10()
                    )),
                ),
                Err(e) => (None, Some(e.to_string())),
            };
            TargetReport {
                x_m: spec.x_m,
                ground_offset_m: spec.ground_offset_m,
                expected_xy,
                irf,
                error,
            }
        })
        .collect();
    Ok(AnalysisReport {
        algo: img.meta.algo,
        mode: img.meta.mode,
        resolution_az_m,
        resolution_rg_m: 0.886 * SPEED_OF_LIGHT / (2.0 * sc.br_bar),
        targets,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffStats {
    pub max_abs_diff: f64,
    pub rms_diff: f64,
    /// `rms_diff` over the RMS magnitude of `a`.
    pub relative_rms: f64,
    pub bitwise_equal: bool,
}

pub fn compare(a: &ComplexRaster, b: &ComplexRaster) -> Result<DiffStats> {
    if a.dims() != b.dims() {
        return Err(Error::precondition(
            "compare",
            format!("dims {:?} and {:?} differ", a.dims(), b.dims()),
        ));
    }
    let mut max = 0.0f64;
    let mut sum = 0.0f64;
    let mut bitwise = a.axis0 == b.axis0 && a.axis1 == b.axis1;
    for (x, y) in a.data().iter().zip(b.data()) {
        let d = ((x.re as f64 - y.re as f64).powi(2) + (x.im as f64 - y.im as f64).powi(2)).sqrt();
        max = max.max(d);
        sum += d * d;
        bitwise &= x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits();
    }
    let n = a.data().len() as f64;
    let rms_diff = (sum / n).sqrt();
    let ref_rms = (a.energy() / n).sqrt();
    Ok(DiffStats {
        max_abs_diff: max,
        rms_diff,
        relative_rms: if ref_rms > 0.0 { rms_diff / ref_rms } else { rms_diff },
        bitwise_equal: bitwise,
    })
}
