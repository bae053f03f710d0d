//! Command implementations behind the `sga` binary.

use std::path::Path;

use crate::azcomp::Algo;
use crate::config::SceneConfig;
use crate::echosim::simulate_echo;
use crate::error::{Error, Result};
use crate::pipeline::{FocusOptions, Processor};
use crate::quicklook;
use crate::report::{analyze, compare, AnalysisReport, DiffStats};
use crate::sgar::{self, SgarFile};

pub const THREADS_ENV: &str = "SGA_THREADS";

/// Worker count requested through `SGA_THREADS`; 0 or unset means automatic.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) if s.trim().is_empty() => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::validation(THREADS_ENV, format!("`{s}` is not a non-negative integer"))),
    }
}

/// Installs the global worker pool. Does nothing for 0.
pub fn init_threads(n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))
}

pub fn cmd_simulate(config: &Path, out: &Path) -> Result<()> {
    let cfg = SceneConfig::load(config)?;
    let raw = simulate_echo(&cfg.targets(), &cfg.radar, &cfg.geometry, cfg.raw_range_start())?;
    let file = SgarFile {
        raster: raw,
        acquisition: Some(cfg.acquisition()),
        image: None,
    };
    sgar::write(out, &file)
}

/// Focuses a raw raster. The acquisition comes from `config` when given,
/// otherwise from the raster's sidecar.
pub fn cmd_focus(input: &Path, out: &Path, opts: FocusOptions, config: Option<&Path>) -> Result<Algo> {
    let file = sgar::read(input)?;
    let acq = match config {
        Some(c) => SceneConfig::load(c)?.acquisition(),
        None => file.acquisition.ok_or_else(|| {
            Error::precondition("focus", "raster carries no acquisition record; pass --config")
        })?,
    };
    let proc = Processor::new(&acq)?;
    let img = proc.focus(&file.raster, opts)?;
    let algo = img.meta.algo;
    sgar::write(out, &SgarFile::focused(img, &acq))?;
    Ok(algo)
}

/// Writes the report, then fails if any target peak was not found.
pub fn cmd_analyze(input: &Path, config: &Path, report: &Path) -> Result<AnalysisReport> {
    let cfg = SceneConfig::load(config)?;
    let (img, _) = sgar::read(input)?.into_image()?;
    let rep = analyze(&img, &cfg)?;
    let json = serde_json::to_string_pretty(&rep)?;
    std::fs::write(report, json).map_err(|e| Error::io(report, e))?;
    match rep.missing() {
        0 => Ok(rep),
        n => Err(Error::PeakNotFound(format!(
            "{n} of {} targets have no peak near their expected position",
            rep.targets.len()
        ))),
    }
}

pub fn cmd_quicklook(input: &Path, png: &Path) -> Result<()> {
    quicklook::write_png(&sgar::read(input)?.raster, png)
}

pub fn cmd_compare(a: &Path, b: &Path) -> Result<DiffStats> {
    compare(&sgar::read(a)?.raster, &sgar::read(b)?.raster)
}
