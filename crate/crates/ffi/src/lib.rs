//! C ABI over `sga-core`.
//!
//! Objects are opaque handles created by `sga_*` constructors and released
//! with the matching `*_free`. Every fallible call returns an [`SgaStatus`];
//! on failure `sga_last_error` describes the problem. Handles are not
//! thread-safe to share mutably, but distinct handles may be used from
//! different threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use sga_core::azcomp::{Algo, FocusedImage};
use sga_core::config::{Acquisition, SceneConfig};
use sga_core::echosim::simulate_echo;
use sga_core::pipeline::{FocusOptions, Processor};
use sga_core::report::analyze;
use sga_core::sgar::{self, SgarFile};
use sga_core::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgaStatus {
    Ok = 0,
    /// A required pointer argument was null or a string was not UTF-8.
    InvalidArgument = 1,
    /// Configuration or precondition failure (CLI exit code 2).
    Validation = 2,
    /// Numerical or coverage failure (CLI exit code 3).
    Numerical = 3,
    Io = 4,
    /// Malformed file contents.
    Format = 5,
    /// Caller buffer too small.
    BufferTooSmall = 6,
    /// Internal error; the library state is unchanged.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgaAlgo {
    Classic = 0,
    Extended = 1,
}

pub struct SgaConfig {
    inner: SceneConfig,
}

pub struct SgaRaster {
    inner: SgarFile,
}

pub struct SgaImage {
    image: FocusedImage,
    acquisition: Acquisition,
}

/// Impulse-response measurements of one configured target. `found` is 0
/// when no peak was found near `expected_x`, `expected_y`; the remaining
/// fields are then NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgaIrfReport {
    pub found: i32,
    pub expected_x: f64,
    pub expected_y: f64,
    pub peak_x: f64,
    pub peak_y: f64,
    pub width_az: f64,
    pub width_rg: f64,
    pub pslr_az: f64,
    pub pslr_rg: f64,
    pub islr_az: f64,
    pub islr_rg: f64,
    pub peak_mag: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> SgaStatus {
    match e {
        Error::Io { .. } => SgaStatus::Io,
        Error::Format { .. } | Error::Json(_) => SgaStatus::Format,
        other => match other.exit_code() {
            3 => SgaStatus::Numerical,
            _ => SgaStatus::Validation,
        },
    }
}

struct Fail(SgaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn invalid(what: &str) -> Fail {
    Fail(SgaStatus::InvalidArgument, format!("{what} is null or invalid"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SgaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgaStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SgaStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(what))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| invalid(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sga_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread; empty if none failed.
#[no_mangle]
pub extern "C" fn sga_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sga_config_from_json(json: *const c_char, out: *mut *mut SgaConfig) -> SgaStatus {
    guard(|| {
        let cfg = SceneConfig::from_json(str_arg(json, "json")?)?;
        put(out, SgaConfig { inner: cfg })
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sga_config_load(path: *const c_char, out: *mut *mut SgaConfig) -> SgaStatus {
    guard(|| {
        let cfg = SceneConfig::load(str_arg(path, "path")?)?;
        put(out, SgaConfig { inner: cfg })
    })
}

/// # Safety
/// `cfg` must be null or a handle from `sga_config_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sga_config_free(cfg: *mut SgaConfig) {
    free(cfg)
}

/// Simulates the raw echoes of the configured targets.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sga_simulate(cfg: *const SgaConfig, out: *mut *mut SgaRaster) -> SgaStatus {
    guard(|| {
        let cfg = &ref_arg(cfg, "config")?.inner;
        let raw = simulate_echo(&cfg.targets(), &cfg.radar, &cfg.geometry, cfg.raw_range_start())?;
        let file = SgarFile {
            raster: raw,
            acquisition: Some(cfg.acquisition()),
            image: None,
        };
        put(out, SgaRaster { inner: file })
    })
}

/// # Safety
/// `raster` must be a live handle; `n_az` and `n_rg` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sga_raster_dims(raster: *const SgaRaster, n_az: *mut usize, n_rg: *mut usize) -> SgaStatus {
    guard(|| {
        let r = &ref_arg(raster, "raster")?.inner.raster;
        if n_az.is_null() || n_rg.is_null() {
            return Err(invalid("dims output"));
        }
        *n_az = r.n_az();
        *n_rg = r.n_rg();
        Ok(())
    })
}

/// Copies the samples as interleaved (re, im) floats, azimuth-major.
/// `len` is the capacity of `out` in floats and must be at least
/// `2·n_az·n_rg`.
///
/// # Safety
/// `raster` must be a live handle and `out` valid for `len` floats.
#[no_mangle]
pub unsafe extern "C" fn sga_raster_copy_data(raster: *const SgaRaster, out: *mut f32, len: usize) -> SgaStatus {
    guard(|| {
        let data = ref_arg(raster, "raster")?.inner.raster.data();
        let need = 2 * data.len();
        if out.is_null() {
            return Err(invalid("output buffer"));
        }
        if len < need {
            return Err(Fail(
                SgaStatus::BufferTooSmall,
                format!("buffer holds {len} floats, {need} needed"),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(out, need);
        for (pair, v) in dst.chunks_exact_mut(2).zip(data) {
            pair[0] = v.re;
            pair[1] = v.im;
        }
        Ok(())
    })
}

/// Reads an SGAR file; `.sgar` is appended to `path` when missing.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sga_raster_read(path: *const c_char, out: *mut *mut SgaRaster) -> SgaStatus {
    guard(|| {
        let file = sgar::read(str_arg(path, "path")?)?;
        put(out, SgaRaster { inner: file })
    })
}

/// # Safety
/// `raster` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sga_raster_write(raster: *const SgaRaster, path: *const c_char) -> SgaStatus {
    guard(|| {
        let r = ref_arg(raster, "raster")?;
        sgar::write(PathBuf::from(str_arg(path, "path")?), &r.inner)?;
        Ok(())
    })
}

/// # Safety
/// `raster` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sga_raster_free(raster: *mut SgaRaster) {
    free(raster)
}

/// Focuses a raw raster. `cfg` may be null, in which case the acquisition
/// record stored with the raster is used. Extended processing of spotlight
/// data runs the classic chain.
///
/// # Safety
/// `raw` must be a live handle, `cfg` null or a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn sga_focus(
    raw: *const SgaRaster,
    cfg: *const SgaConfig,
    algo: SgaAlgo,
    out: *mut *mut SgaImage,
) -> SgaStatus {
    guard(|| {
        let file = &ref_arg(raw, "raster")?.inner;
        let acq = match cfg.as_ref() {
            Some(c) => c.inner.acquisition(),
            None => file.acquisition.clone().ok_or_else(|| {
                Fail(
                    SgaStatus::Validation,
                    "raster carries no acquisition record; pass a config".into(),
                )
            })?,
        };
        let opts = FocusOptions {
            algo: match algo {
                SgaAlgo::Classic => Algo::Classic,
                SgaAlgo::Extended => Algo::Extended,
            },
            az_oversample: 1,
        };
        let image = Processor::new(&acq)?.focus(&file.raster, opts)?;
        put(out, SgaImage { image, acquisition: acq })
    })
}

/// Measures every target of `cfg` in the image. Writes up to `cap` reports
/// to `out` and the number of configured targets to `n_targets`; returns
/// `BufferTooSmall` if `cap` is short.
///
/// # Safety
/// `img` and `cfg` must be live handles, `out` valid for `cap` reports
/// (may be null when `cap` is 0), `n_targets` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sga_image_analyze(
    img: *const SgaImage,
    cfg: *const SgaConfig,
    out: *mut SgaIrfReport,
    cap: usize,
    n_targets: *mut usize,
) -> SgaStatus {
    guard(|| {
        let img = ref_arg(img, "image")?;
        let cfg = &ref_arg(cfg, "config")?.inner;
        if n_targets.is_null() {
            return Err(invalid("n_targets"));
        }
        let rep = analyze(&img.image, cfg)?;
        *n_targets = rep.targets.len();
        if cap < rep.targets.len() {
            return Err(Fail(
                SgaStatus::BufferTooSmall,
                format!("room for {cap} reports, {} targets", rep.targets.len()),
            ));
        }
        if out.is_null() && !rep.targets.is_empty() {
            return Err(invalid("report buffer"));
        }
        for (k, t) in rep.targets.iter().enumerate() {
            let nan = f64::NAN;
            let mut r = SgaIrfReport {
                found: 0,
                expected_x: t.expected_xy.0,
                expected_y: t.expected_xy.1,
                peak_x: nan,
                peak_y: nan,
                width_az: nan,
                width_rg: nan,
                pslr_az: nan,
                pslr_rg: nan,
                islr_az: nan,
                islr_rg: nan,
                peak_mag: nan,
            };
            if let Some(m) = &t.irf {
                r.found = 1;
                r.peak_x = m.peak_xy.0;
                r.peak_y = m.peak_xy.1;
                r.width_az = m.width_az;
                r.width_rg = m.width_rg;
                r.pslr_az = m.pslr_az;
                r.pslr_rg = m.pslr_rg;
                r.islr_az = m.islr_az;
                r.islr_rg = m.islr_rg;
                r.peak_mag = m.peak_mag;
            }
            *out.add(k) = r;
        }
        Ok(())
    })
}

/// A raster handle holding a copy of the image and its metadata.
///
/// # Safety
/// `img` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sga_image_raster(img: *const SgaImage, out: *mut *mut SgaRaster) -> SgaStatus {
    guard(|| {
        let img = ref_arg(img, "image")?;
        let file = SgarFile::focused(img.image.clone(), &img.acquisition);
        put(out, SgaRaster { inner: file })
    })
}

/// # Safety
/// `img` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sga_image_write(img: *const SgaImage, path: *const c_char) -> SgaStatus {
    guard(|| {
        let img = ref_arg(img, "image")?;
        let file = SgarFile::focused(img.image.clone(), &img.acquisition);
        sgar::write(str_arg(path, "path")?, &file)?;
        Ok(())
    })
}

/// # Safety
/// `img` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sga_image_free(img: *mut SgaImage) {
    free(img)
}
