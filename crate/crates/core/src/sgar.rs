//! SGAR v1 raster files: a JSON sidecar `<name>.sgar.json` next to a payload
//! `<name>.sgar` of little-endian f32 (re, im) pairs, azimuth-major.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex32;
use serde::{Deserialize, Serialize};

use crate::azcomp::{FocusedImage, ImageMeta};
use crate::config::Acquisition;
use crate::error::{Error, Result};
use crate::raster::{AxisMeta, ComplexRaster, Domain};

pub const VERSION: u32 = 1;
const EXT: &str = "sgar";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct AxisRecord {
    domain: Domain,
    origin: f64,
    step: f64,
    unit: String,
    #[serde(default)]
    conjugate_center: f64,
}

impl From<&AxisMeta> for AxisRecord {
    fn from(a: &AxisMeta) -> Self {
        AxisRecord {
            domain: a.domain,
            origin: a.origin,
            step: a.step,
            unit: a.domain.unit().into(),
            conjugate_center: a.conjugate_center,
        }
    }
}

impl AxisRecord {
    fn to_meta(&self) -> AxisMeta {
        AxisMeta {
            domain: self.domain,
            origin: self.origin,
            step: self.step,
            conjugate_center: self.conjugate_center,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Sidecar {
    version: u32,
    dims: [usize; 2],
    axis0: AxisRecord,
    axis1: AxisRecord,
    stage_tag: String,
    byte_order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    acquisition: Option<Acquisition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    image: Option<ImageMeta>,
}

/// Contents of an SGAR file: the raster plus whatever processing context was
/// stored with it.
#[derive(Debug, Clone, PartialEq)]
pub struct SgarFile {
    pub raster: ComplexRaster,
    pub acquisition: Option<Acquisition>,
    pub image: Option<ImageMeta>,
}

impl SgarFile {
    pub fn new(raster: ComplexRaster) -> Self {
        SgarFile {
            raster,
            acquisition: None,
            image: None,
        }
    }

    pub fn focused(img: FocusedImage, acq: &Acquisition) -> Self {
        SgarFile {
            raster: img.raster,
            acquisition: Some(acq.clone()),
            image: Some(img.meta),
        }
    }

    /// The stored raster as a focused image, if it carries image metadata.
    pub fn into_image(self) -> Result<(FocusedImage, Option<Acquisition>)> {
        let meta = self.image.ok_or_else(|| {
            Error::precondition("image", "raster has no image metadata; it is not a focused image")
        })?;
        Ok((
            FocusedImage {
                raster: self.raster,
                meta,
            },
            self.acquisition,
        ))
    }
}

/// Payload and sidecar paths for `path`; `.sgar` is appended when missing.
pub fn paths(path: impl AsRef<Path>) -> (PathBuf, PathBuf) {
    let p = path.as_ref();
    let payload = if p.extension().is_some_and(|e| e == EXT) {
        p.to_path_buf()
    } else {
        let mut s = p.as_os_str().to_owned();
        s.push(".");
        s.push(EXT);
        PathBuf::from(s)
    };
    let mut side = payload.as_os_str().to_owned();
    side.push(".json");
    (payload, PathBuf::from(side))
}

pub fn write(path: impl AsRef<Path>, file: &SgarFile) -> Result<()> {
    let (payload, side) = paths(path);
    let r = &file.raster;
    let sidecar = Sidecar {
        version: VERSION,
        dims: r.dims(),
        axis0: (&r.axis0).into(),
        axis1: (&r.axis1).into(),
        stage_tag: r.stage_tag.clone(),
        byte_order: "LE".into(),
        acquisition: file.acquisition.clone(),
        image: file.image,
    };
    let mut bytes = Vec::with_capacity(r.data().len() * 8);
    for v in r.data() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    let f = fs::File::create(&payload).map_err(|e| Error::io(&payload, e))?;
    let mut w = BufWriter::new(f);
    w.write_all(&bytes)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(&payload, e))?;
    let json = serde_json::to_string_pretty(&sidecar)?;
    fs::write(&side, json).map_err(|e| Error::io(&side, e))
}

pub fn write_raster(path: impl AsRef<Path>, raster: &ComplexRaster) -> Result<()> {
    write(path, &SgarFile::new(raster.clone()))
}

pub fn read(path: impl AsRef<Path>) -> Result<SgarFile> {
    let (payload, side) = paths(path);
    let format = |reason: String| Error::Format {
        path: side.clone(),
        reason,
    };
    let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let sc: Sidecar = serde_json::from_str(&text).map_err(|e| format(e.to_string()))?;
    if sc.version != VERSION {
        return Err(format(format!("unsupported version {}", sc.version)));
    }
    if sc.byte_order != "LE" {
        return Err(format(format!("unsupported byte order `{}`", sc.byte_order)));
    }
    for (name, ax) in [("axis0", &sc.axis0), ("axis1", &sc.axis1)] {
        if ax.unit != ax.domain.unit() {
            return Err(format(format!(
                "{name} unit `{}` does not match domain {:?}",
                ax.unit, ax.domain
            )));
        }
    }
    let bytes = fs::read(&payload).map_err(|e| Error::io(&payload, e))?;
    let [n_az, n_rg] = sc.dims;
    let expect = n_az.checked_mul(n_rg).and_then(|n| n.checked_mul(8));
    if expect != Some(bytes.len()) {
        return Err(Error::Format {
            path: payload,
            reason: format!("{} bytes for declared dims {n_az}x{n_rg}", bytes.len()),
        });
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| {
            Complex32::new(
                f32::from_le_bytes([c[0], c[1], c[2], c[3]]),
                f32::from_le_bytes([c[4], c[5], c[6], c[7]]),
            )
        })
        .collect();
    let raster = ComplexRaster::from_data(n_az, n_rg, data, sc.axis0.to_meta(), sc.axis1.to_meta(), sc.stage_tag)
        .map_err(|e| format(e.to_string()))?;
    Ok(SgarFile {
        raster,
        acquisition: sc.acquisition,
        image: sc.image,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ComplexRaster {
        let mut r = ComplexRaster::zeros(3, 4, AxisMeta::time(-1.0, 0.5), AxisMeta::time(1e-3, 1e-8), "echo").unwrap();
        for (k, v) in r.data_mut().iter_mut().enumerate() {
            *v = Complex32::new(k as f32 * 0.1, -(k as f32).sqrt());
        }
        r.data_mut()[5] = Complex32::new(f32::MIN_POSITIVE, -0.0);
        r
    }

    #[test]
    fn extension_is_appended_once() {
        let (a, b) = paths("/tmp/x");
        assert_eq!(a, PathBuf::from("/tmp/x.sgar"));
        assert_eq!(b, PathBuf::from("/tmp/x.sgar.json"));
        assert_eq!(paths("/tmp/x.sgar").0, a);
    }

    #[test]
    fn round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r");
        let r = sample();
        write_raster(&p, &r).unwrap();
        let back = read(&p).unwrap().raster;
        assert_eq!(back.dims(), r.dims());
        assert_eq!(back.axis0, r.axis0);
        assert_eq!(back.axis1, r.axis1);
        for (a, b) in back.data().iter().zip(r.data()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        let side: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("r.sgar.json")).unwrap()).unwrap();
        assert_eq!(side["byte_order"], "LE");
        assert_eq!(side["axis1"]["unit"], "s");
        assert_eq!(side["dims"], serde_json::json!([3, 4]));
    }

    #[test]
    fn truncated_payload_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.sgar");
        write_raster(&p, &sample()).unwrap();
        let bytes = fs::read(&p).unwrap();
        fs::write(&p, &bytes[..bytes.len() - 3]).unwrap();
        let err = read(&p).unwrap_err();
        assert!(matches!(err, Error::Format { .. }), "{err}");
        assert_eq!(err.exit_code(), 2);
    }
}
