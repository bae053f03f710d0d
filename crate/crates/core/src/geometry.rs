//! Data-collection geometry on a spherical Earth.
//!
//! The frame is Earth-centred: the radar position at the aperture centre
//! defines +y, the velocity defines +x and +z completes a right-handed set.
//! The orbit is circular in the x-y plane, so the radar sits at
//! `(R sin θ, R cos θ, 0)` with `θ = v·t_a / R`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Propagation speed (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spotlight,
    Stripmap,
    Tops,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Spotlight => "spotlight",
            Mode::Stripmap => "stripmap",
            Mode::Tops => "tops",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionGeometry {
    /// Orbit radius from the Earth centre, `R`.
    #[serde(rename = "orbit_radius_m")]
    pub orbit_radius: f64,
    /// Earth radius, `R0`.
    #[serde(rename = "earth_radius_m")]
    pub earth_radius: f64,
    /// Orbit radius at the aperture centre, `R_c`. Equal to `R` for a circular orbit.
    #[serde(rename = "centre_orbit_radius_m")]
    pub centre_orbit_radius: f64,
    /// Slant range from the aperture centre to the scene centre.
    #[serde(rename = "reference_range_m")]
    pub reference_range: f64,
    #[serde(rename = "speed_mps")]
    pub speed: f64,
    pub mode: Mode,
    /// Data acquisition time `T_a`.
    #[serde(rename = "acquisition_time_s")]
    pub acquisition_time: f64,
    /// Per-target illumination (dwell) time `T_u`.
    #[serde(rename = "dwell_time_s")]
    pub dwell_time: f64,
    /// Range from the scene centre to the flight path.
    #[serde(rename = "scene_range_m")]
    pub scene_range: f64,
    /// Range from the virtual rotation centre to the flight path (TOPS only).
    #[serde(
        rename = "rotation_centre_range_m",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub rotation_centre_range: Option<f64>,
}

/// An ideal point scatterer on the Earth sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTarget {
    pub position: Vec3,
    pub amplitude: Complex64,
}

impl PointTarget {
    pub fn x(&self) -> f64 {
        self.position[0]
    }

    pub fn y(&self) -> f64 {
        self.position[1]
    }

    pub fn z(&self) -> f64 {
        self.position[2]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarParams {
    #[serde(rename = "carrier_frequency_hz")]
    pub carrier_frequency: f64,
    #[serde(rename = "bandwidth_hz")]
    pub bandwidth: f64,
    #[serde(rename = "prf_hz")]
    pub prf: f64,
    #[serde(rename = "sample_rate_hz")]
    pub sample_rate: f64,
    /// Number of pulses `N_a`.
    pub pulses: usize,
    /// Fast-time samples per pulse `N_r`.
    pub range_samples: usize,
}

impl RadarParams {
    pub fn c(&self) -> f64 {
        SPEED_OF_LIGHT
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Slow time of pulse `n`, centred on the aperture centre.
    pub fn pulse_time(&self, n: usize) -> f64 {
        (n as f64 - (self.pulses / 2) as f64) / self.prf
    }

    pub fn validate(&self, geom: &AcquisitionGeometry) -> Result<()> {
        positive("radar.carrier_frequency_hz", self.carrier_frequency)?;
        positive("radar.bandwidth_hz", self.bandwidth)?;
        positive("radar.prf_hz", self.prf)?;
        positive("radar.sample_rate_hz", self.sample_rate)?;
        if self.sample_rate < self.bandwidth {
            return Err(Error::validation(
                "radar.sample_rate_hz",
                format!(
                    "sample rate {} Hz is below the bandwidth {} Hz",
                    self.sample_rate, self.bandwidth
                ),
            ));
        }
        for (field, n) in [
            ("radar.pulses", self.pulses),
            ("radar.range_samples", self.range_samples),
        ] {
            if n < 2 || n % 2 != 0 {
                return Err(Error::validation(field, format!("{n} must be even and >= 2")));
            }
        }
        let recorded = self.pulses as f64 / self.prf;
        if recorded + 1.0 / self.prf < geom.acquisition_time {
            return Err(Error::validation(
                "radar.pulses",
                format!(
                    "{} pulses at {} Hz span {recorded} s, shorter than the acquisition time {} s",
                    self.pulses, self.prf, geom.acquisition_time
                ),
            ));
        }
        Ok(())
    }
}

fn positive(field: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(field, format!("{value} must be finite and > 0")))
    }
}

/// Maps between physical slow time and the time variable that is linear in
/// `tan θ`, `τ = (R_c / v) tan θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AzimuthClock {
    /// Treat the raster's slow-time axis as already linear in `tan θ`.
    Uniform,
    TanTheta {
        orbit_radius: f64,
        centre_orbit_radius: f64,
        speed: f64,
    },
}

impl AzimuthClock {
    pub fn tan_time(&self, t: f64) -> f64 {
        match *self {
            AzimuthClock::Uniform => t,
            AzimuthClock::TanTheta {
                orbit_radius,
                centre_orbit_radius,
                speed,
            } => centre_orbit_radius / speed * (speed * t / orbit_radius).tan(),
        }
    }

    pub fn physical_time(&self, tau: f64) -> f64 {
        match *self {
            AzimuthClock::Uniform => tau,
            AzimuthClock::TanTheta {
                orbit_radius,
                centre_orbit_radius,
                speed,
            } => orbit_radius / speed * (speed * tau / centre_orbit_radius).atan(),
        }
    }
}

impl AcquisitionGeometry {
    pub fn validate(&self) -> Result<()> {
        positive("geometry.earth_radius_m", self.earth_radius)?;
        positive("geometry.orbit_radius_m", self.orbit_radius)?;
        positive("geometry.centre_orbit_radius_m", self.centre_orbit_radius)?;
        positive("geometry.speed_mps", self.speed)?;
        positive("geometry.dwell_time_s", self.dwell_time)?;
        positive("geometry.scene_range_m", self.scene_range)?;
        if self.orbit_radius <= self.earth_radius {
            return Err(Error::validation(
                "geometry.orbit_radius_m",
                "orbit radius must exceed the Earth radius",
            ));
        }
        if !(self.acquisition_time >= self.dwell_time) {
            return Err(Error::validation(
                "geometry.acquisition_time_s",
                format!(
                    "acquisition time {} s is shorter than the dwell time {} s",
                    self.acquisition_time, self.dwell_time
                ),
            ));
        }
        let (r, r0) = (self.orbit_radius, self.earth_radius);
        let (lo, hi) = ((r - r0).abs(), (r * r + r0 * r0).sqrt());
        if !(self.reference_range >= lo && self.reference_range <= hi) {
            return Err(Error::validation(
                "geometry.reference_range_m",
                format!(
                    "{} m is not a slant range to the sphere (must lie in [{lo}, {hi}])",
                    self.reference_range
                ),
            ));
        }
        match (self.mode, self.rotation_centre_range) {
            (Mode::Tops, Some(rc)) => positive("geometry.rotation_centre_range_m", rc)?,
            (Mode::Tops, None) => {
                return Err(Error::validation(
                    "geometry.rotation_centre_range_m",
                    "required in TOPS mode",
                ))
            }
            _ => {}
        }
        Ok(())
    }

    /// Orbital angle swept at slow time `t_a`.
    pub fn theta(&self, t_a: f64) -> f64 {
        self.speed * t_a / self.orbit_radius
    }

    pub fn radar_position(&self, t_a: f64) -> Result<Vec3> {
        let half = 0.5 * self.acquisition_time;
        if !(t_a.abs() <= half) {
            return Err(Error::AzimuthDomain { t_a, half });
        }
        let th = self.theta(t_a);
        Ok([self.orbit_radius * th.sin(), self.orbit_radius * th.cos(), 0.0])
    }

    /// Projection `u = x sin θ + y cos θ` of a target onto the radar direction.
    pub fn projection(&self, t_a: f64, tgt: &PointTarget) -> f64 {
        let th = self.theta(t_a);
        tgt.x() * th.sin() + tgt.y() * th.cos()
    }

    /// Slant range from the projection `u`; valid for any point on the sphere.
    pub fn range_from_projection(&self, u: f64) -> f64 {
        let (r, r0) = (self.orbit_radius, self.earth_radius);
        (r * r + r0 * r0 - 2.0 * r * u).sqrt()
    }

    /// Inverse of [`Self::range_from_projection`].
    pub fn projection_from_range(&self, range: f64) -> f64 {
        let (r, r0) = (self.orbit_radius, self.earth_radius);
        (r * r + r0 * r0 - range * range) / (2.0 * r)
    }

    /// Radar-to-target slant range at slow time `t_a` (Cartesian form).
    pub fn range_history(&self, t_a: f64, tgt: &PointTarget) -> f64 {
        let th = self.theta(t_a);
        let dx = self.orbit_radius * th.sin() - tgt.x();
        let dy = self.orbit_radius * th.cos() - tgt.y();
        let dz = tgt.z();
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Slow time at the centre of a target's illumination window.
    pub fn support_centre(&self, tgt: &PointTarget) -> f64 {
        match self.mode {
            Mode::Spotlight => 0.0,
            Mode::Stripmap => tgt.x() / self.speed,
            Mode::Tops => self.tops_scale() * tgt.x() / self.speed,
        }
    }

    /// Ideal rect antenna support: 1 while the beam illuminates `tgt`.
    pub fn beam_support(&self, t_a: f64, tgt: &PointTarget) -> f64 {
        let (centre, width) = match self.mode {
            Mode::Spotlight => (0.0, self.acquisition_time),
            Mode::Stripmap | Mode::Tops => (self.support_centre(tgt), self.dwell_time),
        };
        if (t_a - centre).abs() <= 0.5 * width {
            1.0
        } else {
            0.0
        }
    }

    /// Rate `k_t` at which the instantaneous Doppler centroid drifts after
    /// range processing.
    pub fn doppler_centroid_rate(&self, wavelength: f64) -> Result<f64> {
        let v2 = self.speed * self.speed;
        match (self.mode, self.rotation_centre_range) {
            (Mode::Spotlight, _) => Err(Error::UnsupportedMode {
                op: "doppler_centroid_rate",
                mode: Mode::Spotlight,
            }),
            (Mode::Stripmap, _) => Ok(2.0 * v2 / (wavelength * self.scene_range)),
            (Mode::Tops, Some(rc)) => {
                Ok(2.0 * v2 / (wavelength * self.scene_range) + 2.0 * v2 / (wavelength * rc))
            }
            (Mode::Tops, None) => Err(Error::validation(
                "geometry.rotation_centre_range_m",
                "required in TOPS mode",
            )),
        }
    }

    /// Azimuth compression factor `R_centre / (R_scene + R_centre)` of TOPS
    /// imagery; 1 in the other modes.
    pub fn tops_scale(&self) -> f64 {
        match (self.mode, self.rotation_centre_range) {
            (Mode::Tops, Some(rc)) => rc / (self.scene_range + rc),
            _ => 1.0,
        }
    }

    pub fn clock(&self) -> AzimuthClock {
        AzimuthClock::TanTheta {
            orbit_radius: self.orbit_radius,
            centre_orbit_radius: self.centre_orbit_radius,
            speed: self.speed,
        }
    }

    /// Scene centre: the point of the sphere in the `x = 0` plane, on the
    /// `+z` side, at the reference slant range from the aperture centre.
    pub fn scene_centre(&self) -> Vec3 {
        let y = self.projection_from_range(self.reference_range);
        let z = (self.earth_radius * self.earth_radius - y * y).max(0.0).sqrt();
        [0.0, y, z]
    }

    /// Places a target `along_track` metres from the scene centre in x and
    /// `ground_offset` metres of great-circle arc away from it across track
    /// (positive = farther from the radar).
    pub fn target_on_sphere(
        &self,
        along_track: f64,
        ground_offset: f64,
        amplitude: Complex64,
    ) -> PointTarget {
        let [_, yc, zc] = self.scene_centre();
        let phi = zc.atan2(yc) + ground_offset / self.earth_radius;
        let rho = (self.earth_radius * self.earth_radius - along_track * along_track)
            .max(0.0)
            .sqrt();
        PointTarget {
            position: [along_track, rho * phi.cos(), rho * phi.sin()],
            amplitude,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(mode: Mode) -> AcquisitionGeometry {
        AcquisitionGeometry {
            orbit_radius: 6_903_000.0,
            earth_radius: 6_371_000.0,
            centre_orbit_radius: 6_903_000.0,
            reference_range: 597_000.0,
            speed: 7_500.0,
            mode,
            acquisition_time: 4.0,
            dwell_time: 0.5,
            scene_range: 597_000.0,
            rotation_centre_range: (mode == Mode::Tops).then_some(150_000.0),
        }
    }

    fn on_axis(y: f64) -> PointTarget {
        PointTarget {
            position: [0.0, y, 0.0],
            amplitude: Complex64::new(1.0, 0.0),
        }
    }

    #[test]
    fn aperture_centre_position() {
        let p = geom(Mode::Stripmap).radar_position(0.0).unwrap();
        assert_eq!(p, [0.0, 6_903_000.0, 0.0]);
    }

    #[test]
    fn position_one_second_in() {
        // theta = 7500 / 6.903e6; values frozen from direct evaluation.
        let g = geom(Mode::Stripmap);
        assert!((g.theta(1.0) - 1.086_484_137_331_595e-3).abs() < 1e-15);
        let p = g.radar_position(1.0).unwrap();
        assert!((p[0] - 7_499.998_524_440_361).abs() < 1e-6, "{}", p[0]);
        assert!((p[1] - 6_902_995.925_684_886).abs() < 1e-6, "{}", p[1]);
        let q = g.radar_position(-1.0).unwrap();
        assert_eq!(q[0], -p[0]);
        assert_eq!(q[1], p[1]);
    }

    #[test]
    fn position_outside_window_is_rejected() {
        let g = geom(Mode::Spotlight);
        assert!(matches!(
            g.radar_position(2.1),
            Err(Error::AzimuthDomain { .. })
        ));
    }

    #[test]
    fn nadir_and_antipode_ranges() {
        let g = geom(Mode::Stripmap);
        assert_eq!(g.range_history(0.0, &on_axis(6_371_000.0)), 532_000.0);
        assert_eq!(g.range_history(0.0, &on_axis(-6_371_000.0)), 13_274_000.0);
    }

    #[test]
    fn five_degree_target_dual_form() {
        let g = geom(Mode::Stripmap);
        let a = 5f64.to_radians();
        let tgt = PointTarget {
            position: [0.0, g.earth_radius * a.cos(), g.earth_radius * a.sin()],
            amplitude: Complex64::new(1.0, 0.0),
        };
        for t in [-1.5, 0.0, 0.7] {
            let cart = g.range_history(t, &tgt);
            let viau = g.range_from_projection(g.projection(t, &tgt));
            assert!(((cart - viau) / cart).abs() < 1e-9);
        }
        // sqrt(R^2 + R0^2 - 2 R R0 cos 5deg), evaluated independently
        assert!((g.range_history(0.0, &tgt) - 785_958.551_187_08).abs() < 1e-3);
    }

    #[test]
    fn beam_support_modes() {
        let s = geom(Mode::Spotlight);
        let tgt = s.target_on_sphere(3_000.0, 0.0, Complex64::new(1.0, 0.0));
        assert_eq!(s.beam_support(0.0, &tgt), 1.0);

        let m = geom(Mode::Stripmap);
        let centre = m.target_on_sphere(0.0, 0.0, Complex64::new(1.0, 0.0));
        assert_eq!(m.beam_support(0.25 + 1e-9, &centre), 0.0);
        assert_eq!(m.beam_support(0.25 - 1e-9, &centre), 1.0);

        let mut t = geom(Mode::Tops);
        t.scene_range = 646_000.0;
        let tgt = t.target_on_sphere(10_000.0, 0.0, Complex64::new(1.0, 0.0));
        let expect = 150.0 / 796.0 * 10_000.0 / 7_500.0;
        assert!((t.support_centre(&tgt) - expect).abs() < 1e-12);
        assert!((t.tops_scale() - 0.188_442_211_055_276_4).abs() < 1e-15);
    }

    #[test]
    fn centroid_rate_values() {
        let g = geom(Mode::Stripmap);
        let lambda = SPEED_OF_LIGHT / 5.4e9;
        let kt = g.doppler_centroid_rate(lambda).unwrap();
        assert!((kt - 3_394.308_003_9).abs() < 1e-3, "{kt}");

        let mut fast = g.clone();
        fast.speed *= 2.0;
        let k4 = fast.doppler_centroid_rate(lambda).unwrap();
        assert!((k4 / kt - 4.0).abs() < 1e-12);

        let mut tops = geom(Mode::Tops);
        tops.rotation_centre_range = Some(1e30);
        let kl = tops.doppler_centroid_rate(lambda).unwrap();
        assert!(((kl - kt) / kt).abs() < 1e-12);

        assert!(matches!(
            geom(Mode::Spotlight).doppler_centroid_rate(lambda),
            Err(Error::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn targets_land_on_sphere() {
        let g = geom(Mode::Stripmap);
        let c = g.scene_centre();
        assert!((g.range_history(0.0, &PointTarget { position: c, amplitude: Complex64::new(1.0, 0.0) })
            - g.reference_range)
            .abs()
            < 1e-6);
        for (x, off) in [(0.0, 0.0), (10_000.0, -5_000.0), (-12_000.0, 4_000.0)] {
            let t = g.target_on_sphere(x, off, Complex64::new(1.0, 0.0));
            let n = t.position.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!(((n - g.earth_radius) / g.earth_radius).abs() < 1e-12);
            assert_eq!(t.x(), x);
        }
    }

    #[test]
    fn clock_round_trip() {
        let clock = geom(Mode::Stripmap).clock();
        for t in [-2.0, -0.3, 0.0, 1.7] {
            assert!((clock.physical_time(clock.tan_time(t)) - t).abs() < 1e-13);
        }
    }

    #[test]
    fn validation_catches_bad_geometry() {
        let mut g = geom(Mode::Tops);
        g.rotation_centre_range = None;
        assert!(g.validate().is_err());
        let mut g = geom(Mode::Stripmap);
        g.reference_range = 100.0;
        assert!(g.validate().is_err());
        let mut g = geom(Mode::Stripmap);
        g.dwell_time = 5.0;
        assert!(g.validate().is_err());
        assert!(geom(Mode::Stripmap).validate().is_ok());
    }
}
