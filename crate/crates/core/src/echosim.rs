//! Point-target echo synthesis in the demodulated, pulse-compressed domain.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{AcquisitionGeometry, PointTarget, RadarParams, SPEED_OF_LIGHT};
use crate::interp::sinc;
use crate::raster::{AxisMeta, ComplexRaster};

/// Sinc lobes kept each side of the range envelope peak.
pub const SINC_LOBES: f64 = 32.0;

pub const STAGE: &str = "echo";

/// Simulates `S(t_a, t_r)` for `targets`. The fast-time window starts at
/// `range_start` seconds and holds `radar.range_samples` samples at
/// `radar.sample_rate`.
pub fn simulate_echo(
    targets: &[PointTarget],
    radar: &RadarParams,
    geom: &AcquisitionGeometry,
    range_start: f64,
) -> Result<ComplexRaster> {
    let fs = radar.sample_rate;
    let n_rg = radar.range_samples;
    let axis0 = AxisMeta::time(radar.pulse_time(0), 1.0 / radar.prf);
    let axis1 = AxisMeta::time(range_start, 1.0 / fs);
    let half_ta = 0.5 * geom.acquisition_time;
    let win_hi = range_start + (n_rg - 1) as f64 / fs;
    let reach = SINC_LOBES * fs / radar.bandwidth;

    ComplexRaster::from_rows(radar.pulses, n_rg, axis0, axis1, STAGE, |n, row| {
        let t_a = radar.pulse_time(n);
        if t_a.abs() > half_ta {
            return Ok(());
        }
        for (index, tgt) in targets.iter().enumerate() {
            let a = geom.beam_support(t_a, tgt);
            if a == 0.0 {
                continue;
            }
            let r = geom.range_history(t_a, tgt);
            let delay = 2.0 * r / SPEED_OF_LIGHT;
            if delay < range_start || delay > win_hi {
                return Err(Error::TargetOutsideWindow {
                    index,
                    detail: format!(
                        "delay {delay:.9e} s at t_a = {t_a:.6} s, window [{range_start:.9e}, {win_hi:.9e}] s"
                    ),
                });
            }
            let cycles = (2.0 * radar.carrier_frequency * r / SPEED_OF_LIGHT).rem_euclid(1.0);
            let carrier = tgt.amplitude * a * Complex64::from_polar(1.0, -2.0 * PI * cycles);
            let centre = (delay - range_start) * fs;
            let lo = (centre - reach).ceil().max(0.0) as usize;
            let hi = ((centre + reach).floor() as usize).min(n_rg - 1);
            for (k, v) in row.iter_mut().enumerate().take(hi + 1).skip(lo) {
                let t_r = range_start + k as f64 / fs;
                *v += carrier * sinc(radar.bandwidth * (t_r - delay));
            }
        }
        Ok(())
    })
}
