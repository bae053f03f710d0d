//! Spherical-geometry SAR image formation: echo simulation, classic and
//! extended focusing chains, and focus-quality analysis.

pub mod analysis;
pub mod azcomp;
pub mod cli;
pub mod config;
pub mod echosim;
pub mod error;
pub mod fft;
pub mod geometry;
pub mod interp;
pub mod pipeline;
pub mod polarfmt;
pub mod quicklook;
pub mod raster;
pub mod rangeproc;
pub mod report;
pub mod sgar;

pub use error::{Error, Result};
