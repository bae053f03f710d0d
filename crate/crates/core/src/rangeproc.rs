//! Range preprocessing: change of fast-time variable, phase compensation
//! and range transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{spectrum_axis, CentredFft};
use crate::geometry::{AcquisitionGeometry, RadarParams, SPEED_OF_LIGHT};
use crate::interp::Interpolator;
use crate::raster::{AxisMeta, ComplexRaster, Domain};

pub const STAGE_RESAMPLE: &str = "range_resample";
pub const STAGE_COMPENSATE: &str = "phase_compensate";
pub const STAGE_FFT: &str = "range_fft";

/// Carrier, bandwidth and wavelength after the range change of variable,
/// frozen at the reference slant range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledConstants {
    /// Scaled carrier, negative: `-(R / r_ref)·f_c`.
    pub fc_bar: f64,
    /// Scaled bandwidth magnitude `(R / r_ref)·B_r`.
    pub br_bar: f64,
    /// Scaled wavelength magnitude `c / |f̄_c|`.
    pub lambda_bar: f64,
}

impl ScaledConstants {
    pub fn new(radar: &RadarParams, geom: &AcquisitionGeometry) -> Result<Self> {
        let k = geom.orbit_radius / geom.reference_range;
        let sc = ScaledConstants {
            fc_bar: -k * radar.carrier_frequency,
            br_bar: k * radar.bandwidth,
            lambda_bar: SPEED_OF_LIGHT / (k * radar.carrier_frequency),
        };
        for v in [sc.fc_bar, sc.br_bar, sc.lambda_bar] {
            if !v.is_finite() || v == 0.0 {
                return Err(Error::Numerical(format!("degenerate scaled constant {v}")));
            }
        }
        Ok(sc)
    }

    /// Offset of a target's t̄_r spectrum from zero caused by freezing f̄_c
    /// at `r_ref` when the target sits at slant range `r`.
    pub fn spectral_offset(radar: &RadarParams, geom: &AcquisitionGeometry, r: f64) -> f64 {
        radar.carrier_frequency * geom.orbit_radius * (1.0 / geom.reference_range - 1.0 / r)
    }
}

/// Uniform t̄_r output grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeGrid {
    pub origin: f64,
    pub step: f64,
    pub count: usize,
}

impl RangeGrid {
    pub fn axis(&self) -> AxisMeta {
        AxisMeta::time(self.origin, self.step)
    }

    pub fn last(&self) -> f64 {
        self.origin + (self.count - 1) as f64 * self.step
    }
}

/// Fast time `t_r` that maps to resampled time `t̄_r`.
pub fn fast_time_of(geom: &AcquisitionGeometry, t_bar: f64) -> f64 {
    let (r, r0) = (geom.orbit_radius, geom.earth_radius);
    2.0 / SPEED_OF_LIGHT * (r * r + r0 * r0 - r * SPEED_OF_LIGHT * t_bar).sqrt()
}

/// Inverse of [`fast_time_of`].
pub fn resampled_time_of(geom: &AcquisitionGeometry, t_r: f64) -> f64 {
    let (r, r0) = (geom.orbit_radius, geom.earth_radius);
    let half = 0.5 * SPEED_OF_LIGHT * t_r;
    (r * r + r0 * r0 - half * half) / (r * SPEED_OF_LIGHT)
}

pub fn range_resample(
    raw: &ComplexRaster,
    geom: &AcquisitionGeometry,
    grid: &RangeGrid,
    kernel: &Interpolator,
) -> Result<ComplexRaster> {
    raw.require_domains("range_resample", Domain::Time, Domain::Time)?;
    let win = raw.axis1;
    let win_hi = win.coord((raw.n_rg() - 1) as f64);
    // t_r decreases monotonically with t̄_r
    let (lo, hi) = (fast_time_of(geom, grid.last()), fast_time_of(geom, grid.origin));
    if !(lo >= win.origin && hi <= win_hi) {
        return Err(Error::RangeCoverage {
            lo,
            hi,
            win_lo: win.origin,
            win_hi,
        });
    }
    let positions: Vec<f64> = (0..grid.count)
        .map(|k| win.index_of(fast_time_of(geom, grid.origin + k as f64 * grid.step)))
        .collect();
    let mut out = raw.clone();
    out.axis1 = grid.axis();
    out.stage_tag = STAGE_RESAMPLE.into();
    out.remap_rows(grid.count, |_, src, dst| {
        if src.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
            return Ok(());
        }
        for (d, p) in dst.iter_mut().zip(&positions) {
            *d = kernel.eval(src, *p);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Multiplies by `exp{j(4π/c)(f_c·r − f̄_c·u)}` with `u = c·t̄_r/2`.
pub fn phase_compensate(
    rs: &ComplexRaster,
    geom: &AcquisitionGeometry,
    radar: &RadarParams,
    sc: &ScaledConstants,
) -> Result<ComplexRaster> {
    rs.require_domains("phase_compensate", Domain::Time, Domain::Time)?;
    let axis = rs.axis1;
    let factors: Vec<Complex64> = (0..rs.n_rg())
        .map(|k| compensation_factor(geom, radar, sc, axis.coord(k as f64)))
        .collect();
    let mut out = rs.clone();
    out.stage_tag = STAGE_COMPENSATE.into();
    out.process_rows(|_, row| {
        for (v, f) in row.iter_mut().zip(&factors) {
            *v *= f;
        }
        Ok(())
    })?;
    Ok(out)
}

pub fn compensation_factor(
    geom: &AcquisitionGeometry,
    radar: &RadarParams,
    sc: &ScaledConstants,
    t_bar: f64,
) -> Complex64 {
    let u = 0.5 * SPEED_OF_LIGHT * t_bar;
    let r = geom.range_from_projection(u);
    let a = (2.0 * radar.carrier_frequency * r / SPEED_OF_LIGHT).rem_euclid(1.0);
    let b = (2.0 * sc.fc_bar * u / SPEED_OF_LIGHT).rem_euclid(1.0);
    Complex64::from_polar(1.0, 2.0 * PI * (a - b))
}

/// Unitary centred transform of every row; axis 1 becomes range frequency.
pub fn range_fft(pc: &ComplexRaster) -> Result<ComplexRaster> {
    pc.require_domains("range_fft", Domain::Time, Domain::Time)?;
    let fft = CentredFft::new(pc.n_rg(), false)?;
    let mut out = pc.clone();
    out.axis1 = spectrum_axis(&pc.axis1, pc.n_rg());
    out.stage_tag = STAGE_FFT.into();
    out.process_rows(|_, row| {
        fft.process(row);
        Ok(())
    })?;
    Ok(out)
}
