//! Final compression and image coordinates.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{spectrum_axis, time_axis, CentredFft};
use crate::geometry::{AcquisitionGeometry, Mode, SPEED_OF_LIGHT};
use crate::polarfmt::{STAGE_KEYSTONE, STAGE_RESTORE};
use crate::raster::{Affine, ComplexRaster, Domain};
use crate::rangeproc::ScaledConstants;

pub const STAGE_SPECTRAL: &str = "spectral_compress";
pub const STAGE_MATCHED: &str = "matched_filter_compress";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Classic,
    Extended,
    /// Time-domain reference image.
    Backprojection,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Classic => "classic",
            Algo::Extended => "extended",
            Algo::Backprojection => "backprojection",
        })
    }
}

/// Coordinate metadata of a focused image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageMeta {
    pub algo: Algo,
    pub mode: Mode,
    /// Row index to along-track image coordinate (m).
    pub x_map: Option<Affine>,
    /// Column index to cross-track image coordinate `y` (m).
    pub y_map: Option<Affine>,
    /// Ratio between image x and target x (TOPS azimuth compression).
    pub x_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FocusedImage {
    pub raster: ComplexRaster,
    pub meta: ImageMeta,
}

impl FocusedImage {
    fn maps(&self) -> Result<(Affine, Affine)> {
        match (self.meta.x_map, self.meta.y_map) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(Error::precondition(
                "image coordinates",
                "coordinate maps are not set; run to_ground_coords first",
            )),
        }
    }

    /// Image coordinates `(x, y)` of fractional pixel `(row, col)`.
    pub fn xy_at(&self, row: f64, col: f64) -> Result<(f64, f64)> {
        let (xm, ym) = self.maps()?;
        Ok((xm.apply(row), ym.apply(col)))
    }

    /// Fractional pixel `(row, col)` of image coordinates `(x, y)`.
    pub fn pixel_of(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        let (xm, ym) = self.maps()?;
        Ok((xm.invert(x), ym.invert(y)))
    }

    /// Along-track target coordinate implied by image coordinate `x`.
    pub fn target_x(&self, x_image: f64) -> f64 {
        x_image / self.meta.x_scale
    }
}

fn require_decoupled(op: &'static str, dec: &ComplexRaster) -> Result<()> {
    dec.require_domains(op, Domain::Time, Domain::Frequency)?;
    if dec.stage_tag != STAGE_KEYSTONE && dec.stage_tag != STAGE_RESTORE {
        return Err(Error::precondition(
            op,
            format!("expects Keystone output, got stage `{}`", dec.stage_tag),
        ));
    }
    Ok(())
}

fn range_ifft(r: &mut ComplexRaster) -> Result<()> {
    let ifft = CentredFft::new(r.n_rg(), true)?;
    r.axis1 = time_axis(&r.axis1, r.n_rg());
    r.process_rows(|_, row| {
        ifft.process(row);
        Ok(())
    })
}

/// Classic compression: range inverse transform, then a forward azimuth
/// transform so that positive x lands at positive azimuth frequency.
pub fn spectral_compress(dec: &ComplexRaster, mode: Mode) -> Result<FocusedImage> {
    require_decoupled("spectral_compress", dec)?;
    let mut r = dec.clone();
    range_ifft(&mut r)?;
    let fft = CentredFft::new(r.n_az(), false)?;
    r.axis0 = spectrum_axis(&r.axis0, r.n_az());
    r.process_columns(|_, col| {
        fft.process(col);
        Ok(())
    })?;
    r.stage_tag = STAGE_SPECTRAL.into();
    Ok(FocusedImage {
        raster: r,
        meta: ImageMeta {
            algo: Algo::Classic,
            mode,
            x_map: None,
            y_map: None,
            x_scale: 1.0,
        },
    })
}

/// Azimuth matched filter `H(f̄_a) = exp{−jπ f̄_a² / k_t}` followed by the
/// range inverse transform.
pub fn matched_filter_compress(
    dec: &ComplexRaster,
    k_t: f64,
    geom: &AcquisitionGeometry,
) -> Result<FocusedImage> {
    if !(k_t.is_finite() && k_t != 0.0) {
        return Err(Error::DegenerateFilter);
    }
    require_decoupled("matched_filter_compress", dec)?;
    let mut r = dec.clone();
    let n = r.n_az();
    let fwd = CentredFft::new(n, false)?;
    let inv = CentredFft::new(n, true)?;
    let f_axis = spectrum_axis(&r.axis0, n);
    let filter: Vec<Complex64> = (0..n).map(|k| reference_function(f_axis.coord(k as f64), k_t)).collect();
    r.process_columns(|_, col| {
        fwd.process(col);
        for (v, h) in col.iter_mut().zip(&filter) {
            *v *= h;
        }
        inv.process(col);
        Ok(())
    })?;
    range_ifft(&mut r)?;
    r.stage_tag = STAGE_MATCHED.into();
    Ok(FocusedImage {
        raster: r,
        meta: ImageMeta {
            algo: Algo::Extended,
            mode: geom.mode,
            x_map: None,
            y_map: None,
            x_scale: 1.0,
        },
    })
}

pub fn reference_function(f: f64, k_t: f64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * PI * (0.5 * f * f / k_t).rem_euclid(1.0))
}

/// Fills in the pixel-to-coordinate maps: `x = (λ̄R_c/2v)·f̄_a` for the
/// classic image, `x = v·t̄_a` for the extended one, and `y = c·t̄_r/2`.
pub fn to_ground_coords(
    mut img: FocusedImage,
    geom: &AcquisitionGeometry,
    sc: &ScaledConstants,
) -> FocusedImage {
    let (a0, a1) = (img.raster.axis0, img.raster.axis1);
    let kx = match img.meta.algo {
        Algo::Classic => sc.lambda_bar * geom.centre_orbit_radius / (2.0 * geom.speed),
        Algo::Extended => geom.speed,
        Algo::Backprojection => return img,
    };
    let ky = 0.5 * SPEED_OF_LIGHT;
    img.meta.x_map = Some(Affine {
        offset: kx * a0.origin,
        scale: kx * a0.step,
    });
    img.meta.y_map = Some(Affine {
        offset: ky * a1.origin,
        scale: ky * a1.step,
    });
    img.meta.x_scale = match img.meta.algo {
        Algo::Extended => geom.tops_scale(),
        _ => 1.0,
    };
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::AxisMeta;

    #[test]
    fn reference_function_at_dc_is_one() {
        assert_eq!(reference_function(0.0, 3_000.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn zero_rate_is_degenerate() {
        let r = ComplexRaster::zeros(4, 4, AxisMeta::time(0.0, 1.0), AxisMeta::time(0.0, 1.0), "keystone").unwrap();
        let g = AcquisitionGeometry {
            orbit_radius: 7e6,
            earth_radius: 6.4e6,
            centre_orbit_radius: 7e6,
            reference_range: 7e5,
            speed: 7_500.0,
            mode: Mode::Stripmap,
            acquisition_time: 1.0,
            dwell_time: 0.5,
            scene_range: 7e5,
            rotation_centre_range: None,
        };
        assert!(matches!(matched_filter_compress(&r, 0.0, &g), Err(Error::DegenerateFilter)));
    }

    #[test]
    fn requires_keystone_output() {
        let a = AxisMeta::time(0.0, 1.0);
        let f = spectrum_axis(&a, 4);
        let r = ComplexRaster::zeros(4, 4, a, f, "range_fft").unwrap();
        assert!(matches!(spectral_compress(&r, Mode::Spotlight), Err(Error::Precondition { .. })));
    }
}
