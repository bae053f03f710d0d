//! Polar reformatting: range-frequency scaling, Doppler-centroid removal and
//! the Keystone azimuth rescaling.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{CentredFft, ChirpZ};
use crate::geometry::{AcquisitionGeometry, AzimuthClock, Mode};
use crate::interp::Interpolator;
use crate::raster::{AxisMeta, ComplexRaster, Domain};
use crate::rangeproc::ScaledConstants;

pub const STAGE_REGRID: &str = "tan_theta_regrid";
pub const STAGE_SCALE: &str = "range_freq_scale";
pub const STAGE_CENTROID: &str = "centroid_removal";
pub const STAGE_KEYSTONE: &str = "keystone";
pub const STAGE_RESTORE: &str = "centroid_restore";

/// Resamples the azimuth axis so that samples are uniform in
/// `(R_c / v)·tan θ` instead of physical slow time. Samples that would need
/// data beyond the recorded span are zero.
pub fn tan_theta_regrid(
    spec: &ComplexRaster,
    geom: &AcquisitionGeometry,
    kernel: &Interpolator,
) -> Result<ComplexRaster> {
    if spec.axis0.domain != Domain::Time {
        return Err(Error::precondition("tan_theta_regrid", "axis 0 must be slow time"));
    }
    let axis = spec.axis0;
    let n = spec.n_az();
    check_angles(geom, &axis, n)?;
    let clock = geom.clock();
    let positions: Vec<f64> = (0..n)
        .map(|i| axis.index_of(clock.physical_time(axis.coord(i as f64))))
        .collect();
    let mut out = spec.clone();
    out.stage_tag = STAGE_REGRID.into();
    out.remap_columns(n, |_, col, dst| {
        resample_line(kernel, col, &positions, dst);
        Ok(())
    })?;
    Ok(out)
}

fn check_angles(geom: &AcquisitionGeometry, axis: &AxisMeta, n: usize) -> Result<()> {
    let edge = axis.coord(0.0).abs().max(axis.coord((n - 1) as f64).abs());
    if geom.theta(edge).abs() >= 0.49 * PI {
        return Err(Error::Numerical(format!(
            "orbital angle at t = {edge} s is too close to ±90°; the tan θ map is not monotonic"
        )));
    }
    Ok(())
}

fn resample_line(kernel: &Interpolator, src: &[Complex64], positions: &[f64], dst: &mut [Complex64]) {
    let last = (src.len() - 1) as f64;
    for (d, &p) in dst.iter_mut().zip(positions) {
        *d = if (0.0..=last).contains(&p) {
            kernel.eval(src, p)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
}

/// Substitutes `f_r = δ·f̄_r + f̄_c(δ − 1)`, `δ = 1 / cos θ`, in every
/// pulse's range spectrum.
///
/// Each pulse is evaluated exactly at the mapped frequencies with a
/// chirp-z transform of its t̄_r samples.
pub fn range_freq_scale(
    spec: &ComplexRaster,
    geom: &AcquisitionGeometry,
    sc: &ScaledConstants,
) -> Result<ComplexRaster> {
    spec.require_domains("range_freq_scale", Domain::Time, Domain::Frequency)?;
    let n = spec.n_rg();
    let f_axis = spec.axis1;
    let dt = 1.0 / (n as f64 * f_axis.step);
    let rate = 1.0 / dt;
    let t_c = f_axis.conjugate_center;
    let ifft = CentredFft::new(n, true)?;
    let cz = ChirpZ::new(n, n);
    let a_axis = spec.axis0;
    let mut out = spec.clone();
    out.stage_tag = STAGE_SCALE.into();
    out.process_rows(|i, row| {
        let delta = 1.0 / geom.theta(a_axis.coord(i as f64)).cos();
        let map = |fb: f64| delta * fb + sc.fc_bar * (delta - 1.0);
        let half_band = 0.5 * rate + f_axis.step;
        for fb in [f_axis.coord(0.0), f_axis.coord((n - 1) as f64)] {
            let f = map(fb);
            if f.abs() > half_band {
                return Err(Error::BandCoverage {
                    pulse: i,
                    freq: f,
                    half_band,
                });
            }
        }
        if row.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
            return Ok(());
        }
        ifft.process(row);
        let x = row.to_vec();
        cz.eval(&x, map(f_axis.coord(0.0)) * dt, delta / n as f64, row);
        for (k, v) in row.iter_mut().enumerate() {
            let fb = f_axis.coord(k as f64);
            let cycles = ((map(fb) - fb) * t_c).rem_euclid(1.0);
            *v *= Complex64::from_polar(1.0, -2.0 * PI * cycles);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Multiplier `exp{−jπ k_t ((f̄_c + f̄_r)/f̄_c)² t²}`; `clock` supplies the
/// time variable the subsequent Keystone step is linear in.
pub fn centroid_removal(
    spec: &ComplexRaster,
    k_t: f64,
    sc: &ScaledConstants,
    mode: Mode,
    clock: AzimuthClock,
) -> Result<ComplexRaster> {
    if mode == Mode::Spotlight {
        return Err(Error::UnsupportedMode {
            op: "centroid_removal",
            mode,
        });
    }
    spec.require_domains("centroid_removal", Domain::Time, Domain::Frequency)?;
    let (a_axis, f_axis) = (spec.axis0, spec.axis1);
    let ratios: Vec<f64> = (0..spec.n_rg())
        .map(|k| ((sc.fc_bar + f_axis.coord(k as f64)) / sc.fc_bar).powi(2))
        .collect();
    let mut out = spec.clone();
    out.stage_tag = STAGE_CENTROID.into();
    out.process_rows(|i, row| {
        let tau = clock.tan_time(a_axis.coord(i as f64));
        for (v, q) in row.iter_mut().zip(&ratios) {
            let cycles = (0.5 * k_t * q * tau * tau).rem_euclid(1.0);
            *v *= Complex64::from_polar(1.0, -2.0 * PI * cycles);
        }
        Ok(())
    })?;
    Ok(out)
}

/// Multiplies back `exp{+jπ k_t t̄_a²}` on the Keystone output grid.
pub fn centroid_restore(spec: &ComplexRaster, k_t: f64) -> Result<ComplexRaster> {
    spec.require_domains("centroid_restore", Domain::Time, Domain::Frequency)?;
    let axis = spec.axis0;
    let mut out = spec.clone();
    out.stage_tag = STAGE_RESTORE.into();
    out.process_rows(|i, row| {
        let t = axis.coord(i as f64);
        let w = Complex64::from_polar(1.0, 2.0 * PI * (0.5 * k_t * t * t).rem_euclid(1.0));
        for v in row.iter_mut() {
            *v *= w;
        }
        Ok(())
    })?;
    Ok(out)
}

/// Keystone rescaling `t = (f̄_c / (f̄_c + f̄_r))·t̄_a` of every range-frequency
/// column. The output t̄_a grid has `oversample` times the input density and
/// is centred on the same instant. `clock` maps the rescaled tan-time back to
/// the raster's physical slow time, so the uniform-tanθ regrid happens in the
/// same interpolation; pass [`AzimuthClock::Uniform`] for data that are
/// already uniform in tan-time.
pub fn keystone_resample(
    spec: &ComplexRaster,
    sc: &ScaledConstants,
    kernel: &Interpolator,
    clock: AzimuthClock,
    oversample: usize,
) -> Result<ComplexRaster> {
    spec.require_domains("keystone_resample", Domain::Time, Domain::Frequency)?;
    if oversample == 0 {
        return Err(Error::validation("az_oversample", "must be >= 1"));
    }
    let (a_axis, f_axis) = (spec.axis0, spec.axis1);
    let n = spec.n_az();
    let n_out = n * oversample;
    let step = a_axis.step / oversample as f64;
    let centre = a_axis.coord((n / 2) as f64);
    let out_axis = AxisMeta::time(centre - (n_out / 2) as f64 * step, step);
    let mut out = spec.clone();
    out.stage_tag = STAGE_KEYSTONE.into();
    out.axis0 = out_axis;
    out.remap_columns(n_out, |j, col, dst| {
        let scale = sc.fc_bar / (sc.fc_bar + f_axis.coord(j as f64));
        let positions: Vec<f64> = (0..n_out)
            .map(|m| {
                let tau = scale * out_axis.coord(m as f64);
                a_axis.index_of(clock.physical_time(tau))
            })
            .collect();
        resample_line(kernel, col, &positions, dst);
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::spectrum_axis;
    use crate::interp::InterpKernel;

    fn kernel() -> Interpolator {
        InterpKernel::default().build().unwrap()
    }

    fn sc() -> ScaledConstants {
        ScaledConstants {
            fc_bar: -50.0,
            br_bar: 2.0,
            lambda_bar: 1.0,
        }
    }

    fn spectrum_raster(n_az: usize, n_rg: usize, f: impl Fn(f64, f64) -> Complex64) -> ComplexRaster {
        let a = AxisMeta::time(-((n_az / 2) as f64) * 0.01, 0.01);
        let fa = spectrum_axis(&AxisMeta::time(0.0, 1.0 / 4.0), n_rg);
        let data = (0..n_az * n_rg)
            .map(|k| {
                let v = f(a.coord((k / n_rg) as f64), fa.coord((k % n_rg) as f64));
                num_complex::Complex32::new(v.re as f32, v.im as f32)
            })
            .collect();
        ComplexRaster::from_data(n_az, n_rg, data, a, fa, "range_fft").unwrap()
    }

    #[test]
    fn zero_frequency_column_is_identity() {
        let spec = spectrum_raster(64, 8, |t, _| Complex64::from_polar(1.0, 2.0 * PI * 3.0 * t));
        let out = keystone_resample(&spec, &sc(), &kernel(), AzimuthClock::Uniform, 1).unwrap();
        // column 4 holds f̄_r = 0
        for i in 0..64 {
            assert!((out.get(i, 4) - spec.get(i, 4)).norm() < 1e-6);
        }
    }

    #[test]
    fn keystone_scale_at_band_edge() {
        // |f̄_r| = B̄_r/2 with B̄_r/|f̄_c| = 0.04 gives scale 1/(1 ± 0.02)
        let s = sc();
        let lo = s.fc_bar / (s.fc_bar - 1.0);
        let hi = s.fc_bar / (s.fc_bar + 1.0);
        assert!((lo - 1.0 / 1.02).abs() < 1e-15);
        assert!((hi - 1.0 / 0.98).abs() < 1e-15);
    }

    #[test]
    fn centroid_removal_special_rows_and_columns() {
        let spec = spectrum_raster(16, 8, |_, _| Complex64::new(1.0, 0.0));
        let k_t = 40.0;
        let out = centroid_removal(&spec, k_t, &sc(), Mode::Stripmap, AzimuthClock::Uniform).unwrap();
        for j in 0..8 {
            assert!((out.get(8, j) - spec.get(8, j)).norm() < 1e-7);
        }
        for i in 0..16 {
            let t = spec.axis0.coord(i as f64);
            let want = Complex64::from_polar(1.0, -PI * k_t * t * t);
            let got = out.get(i, 4);
            assert!((Complex64::new(got.re as f64, got.im as f64) - want).norm() < 1e-6);
        }
        assert!(matches!(
            centroid_removal(&spec, k_t, &sc(), Mode::Spotlight, AzimuthClock::Uniform),
            Err(Error::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn restore_undoes_removal_on_zero_frequency() {
        let spec = spectrum_raster(16, 8, |t, _| Complex64::from_polar(1.0, t));
        let removed = centroid_removal(&spec, 25.0, &sc(), Mode::Tops, AzimuthClock::Uniform).unwrap();
        let back = centroid_restore(&removed, 25.0).unwrap();
        for i in 0..16 {
            assert!((back.get(i, 4) - spec.get(i, 4)).norm() < 1e-6);
        }
    }

    #[test]
    fn wrong_domain_is_a_precondition_error() {
        let r = ComplexRaster::zeros(4, 4, AxisMeta::time(0.0, 1.0), AxisMeta::time(0.0, 1.0), "x").unwrap();
        assert!(matches!(
            keystone_resample(&r, &sc(), &kernel(), AzimuthClock::Uniform, 1),
            Err(Error::Precondition { .. })
        ));
    }
}
