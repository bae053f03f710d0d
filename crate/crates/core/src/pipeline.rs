//! End-to-end focusing chain.

use crate::azcomp::{matched_filter_compress, spectral_compress, to_ground_coords, Algo, FocusedImage};
use crate::config::Acquisition;
use crate::error::{Error, Result};
use crate::geometry::Mode;
use crate::interp::Interpolator;
use crate::polarfmt::{centroid_removal, centroid_restore, keystone_resample, range_freq_scale};
use crate::raster::ComplexRaster;
use crate::rangeproc::{phase_compensate, range_fft, range_resample, ScaledConstants};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusOptions {
    pub algo: Algo,
    /// Azimuth output density of the Keystone step. Values above 1 on the
    /// classic path deramp before and reramp after the Keystone step so the
    /// finer grid is free of azimuth aliasing.
    pub az_oversample: usize,
}

impl Default for FocusOptions {
    fn default() -> Self {
        FocusOptions {
            algo: Algo::Extended,
            az_oversample: 1,
        }
    }
}

/// Stage runner bound to one acquisition.
#[derive(Debug, Clone)]
pub struct Processor {
    pub acq: Acquisition,
    pub sc: ScaledConstants,
    pub kernel: Interpolator,
}

impl Processor {
    pub fn new(acq: &Acquisition) -> Result<Self> {
        acq.geometry.validate()?;
        acq.radar.validate(&acq.geometry)?;
        Ok(Processor {
            sc: ScaledConstants::new(&acq.radar, &acq.geometry)?,
            kernel: acq.kernel.build()?,
            acq: acq.clone(),
        })
    }

    /// Range resampling, phase compensation and range transform.
    pub fn range_preprocess(&self, raw: &ComplexRaster) -> Result<ComplexRaster> {
        let g = &self.acq.geometry;
        let rs = range_resample(raw, g, &self.acq.image_grid, &self.kernel)?;
        let pc = phase_compensate(&rs, g, &self.acq.radar, &self.sc)?;
        range_fft(&pc)
    }

    /// Range preprocessing followed by range-frequency scaling: the input of
    /// the centroid-removal step.
    pub fn polar_input(&self, raw: &ComplexRaster) -> Result<ComplexRaster> {
        range_freq_scale(&self.range_preprocess(raw)?, &self.acq.geometry, &self.sc)
    }

    pub fn centroid_rate(&self) -> Result<f64> {
        self.acq.geometry.doppler_centroid_rate(self.acq.radar.wavelength())
    }

    /// The algorithm that actually runs: the extension coincides with the
    /// classic chain in spotlight mode.
    pub fn effective_algo(&self, algo: Algo) -> Algo {
        if self.acq.geometry.mode == Mode::Spotlight {
            Algo::Classic
        } else {
            algo
        }
    }

    /// Centroid removal (if applicable) and Keystone resampling of
    /// range-frequency-scaled data.
    pub fn decouple(&self, scaled: &ComplexRaster, opts: FocusOptions) -> Result<ComplexRaster> {
        let g = &self.acq.geometry;
        let clock = g.clock();
        let algo = self.effective_algo(opts.algo);
        let deramp = g.mode != Mode::Spotlight && (algo == Algo::Extended || opts.az_oversample > 1);
        if !deramp {
            return keystone_resample(scaled, &self.sc, &self.kernel, clock, opts.az_oversample);
        }
        let k_t = self.centroid_rate()?;
        let removed = centroid_removal(scaled, k_t, &self.sc, g.mode, clock)?;
        let ks = keystone_resample(&removed, &self.sc, &self.kernel, clock, opts.az_oversample)?;
        if algo == Algo::Classic {
            centroid_restore(&ks, k_t)
        } else {
            Ok(ks)
        }
    }

    pub fn compress(&self, dec: &ComplexRaster, algo: Algo) -> Result<FocusedImage> {
        let g = &self.acq.geometry;
        let img = match self.effective_algo(algo) {
            Algo::Classic => spectral_compress(dec, g.mode)?,
            Algo::Extended => matched_filter_compress(dec, self.centroid_rate()?, g)?,
            Algo::Backprojection => {
                return Err(Error::precondition("compress", "backprojection is not a focusing chain option"))
            }
        };
        Ok(to_ground_coords(img, g, &self.sc))
    }

    pub fn focus(&self, raw: &ComplexRaster, opts: FocusOptions) -> Result<FocusedImage> {
        if self.effective_algo(opts.algo) != opts.algo {
            log::warn!(
                "extended algorithm requested in {} mode; running the classic chain, which it reduces to",
                self.acq.geometry.mode
            );
        }
        let scaled = self.polar_input(raw)?;
        let dec = self.decouple(&scaled, opts)?;
        self.compress(&dec, opts.algo)
    }
}

pub fn focus(raw: &ComplexRaster, acq: &Acquisition, opts: FocusOptions) -> Result<FocusedImage> {
    Processor::new(acq)?.focus(raw, opts)
}
