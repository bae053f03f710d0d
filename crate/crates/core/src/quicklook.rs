//! 8-bit grayscale PNG previews of rasters.

use std::path::Path;

use image::codecs::png::PngEncoder;
use image::{ExtendedColorType, ImageEncoder};

use crate::error::{Error, Result};
use crate::raster::ComplexRaster;

/// Gray level used when the raster has no dynamic range.
pub const FLAT_LEVEL: u8 = 128;
/// Percentile spreads below this (dB) count as no dynamic range; it absorbs
/// f32 rounding of `|z|`.
const FLAT_DB: f32 = 1e-3;

fn percentile(sorted: &[f32], p: f64) -> f32 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = (pos - lo as f64) as f32;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

/// Row-major 8-bit levels of `20·log10|z|` clipped to its 1st and 99th
/// percentiles. Zero samples render black.
pub fn render(r: &ComplexRaster) -> Vec<u8> {
    let db: Vec<f32> = r
        .data()
        .iter()
        .map(|v| {
            let m = v.norm();
            if m > 0.0 {
                20.0 * m.log10()
            } else {
                f32::NEG_INFINITY
            }
        })
        .collect();
    let mut finite: Vec<f32> = db.iter().copied().filter(|d| d.is_finite()).collect();
    if finite.is_empty() {
        return vec![FLAT_LEVEL; db.len()];
    }
    finite.sort_unstable_by(f32::total_cmp);
    let lo = percentile(&finite, 0.01);
    let hi = percentile(&finite, 0.99);
    let all_finite = finite.len() == db.len();
    if hi - lo < FLAT_DB && all_finite {
        return vec![FLAT_LEVEL; db.len()];
    }
    let span = (hi - lo).max(f32::MIN_POSITIVE);
    db.iter()
        .map(|&d| {
            if !d.is_finite() {
                0
            } else {
                (255.0 * ((d - lo) / span).clamp(0.0, 1.0)).round() as u8
            }
        })
        .collect()
}

pub fn write_png(r: &ComplexRaster, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let pixels = render(r);
    let (w, h) = (r.n_rg() as u32, r.n_az() as u32);
    let mut buf = Vec::new();
    PngEncoder::new(&mut buf)
        .write_image(&pixels, w, h, ExtendedColorType::L8)
        .map_err(|e| Error::Format {
            path: path.into(),
            reason: e.to_string(),
        })?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
