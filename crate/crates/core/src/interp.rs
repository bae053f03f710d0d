//! Kaiser-windowed sinc interpolation with a tabulated kernel.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interpolator settings as they appear in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpKernel {
    /// Total number of taps (the kernel reaches `taps / 2` samples each side).
    pub taps: usize,
    /// Kaiser shape parameter.
    pub beta: f64,
    /// Table entries per unit sample offset.
    pub oversample: usize,
}

impl Default for InterpKernel {
    fn default() -> Self {
        InterpKernel {
            taps: 16,
            beta: 8.0,
            oversample: 512,
        }
    }
}

impl InterpKernel {
    pub fn validate(&self) -> Result<()> {
        if self.taps < 4 || self.taps > 64 || self.taps % 2 != 0 {
            return Err(Error::validation(
                "kernel.taps",
                format!("{} must be even and within [4, 64]", self.taps),
            ));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::validation("kernel.beta", format!("{} must be > 0", self.beta)));
        }
        if self.oversample < 64 {
            return Err(Error::validation(
                "kernel.oversample",
                format!("{} must be >= 64", self.oversample),
            ));
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Interpolator> {
        self.validate()?;
        let half = self.taps / 2;
        let n = half * self.oversample;
        let i0b = bessel_i0(self.beta);
        let table = (0..=n + 1)
            .map(|k| {
                let d = k as f64 / self.oversample as f64;
                if d >= half as f64 {
                    return 0.0;
                }
                let w = bessel_i0(self.beta * (1.0 - (d / half as f64).powi(2)).sqrt()) / i0b;
                sinc(d) * w
            })
            .collect();
        Ok(Interpolator {
            half,
            oversample: self.oversample as f64,
            table: Arc::new(table),
        })
    }
}

/// Normalised sinc, `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Modified Bessel function of the first kind, order zero (power series).
fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut sum, mut k) = (1.0, 1.0, 1.0);
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// Ready-to-use interpolator; cheap to clone and share between threads.
#[derive(Debug, Clone)]
pub struct Interpolator {
    half: usize,
    oversample: f64,
    table: Arc<Vec<f64>>,
}

impl Interpolator {
    /// Samples each side of the interpolation point that the kernel touches.
    pub fn half_width(&self) -> usize {
        self.half
    }

    fn weight(&self, d: f64) -> f64 {
        let p = d.abs() * self.oversample;
        let k = p as usize;
        if k + 1 >= self.table.len() {
            return 0.0;
        }
        let f = p - k as f64;
        self.table[k] * (1.0 - f) + self.table[k + 1] * f
    }

    /// Value of `line` at fractional index `pos`; samples outside the line
    /// count as zero.
    pub fn eval(&self, line: &[Complex64], pos: f64) -> Complex64 {
        let base = pos.floor();
        let frac = pos - base;
        let base = base as i64;
        let h = self.half as i64;
        let mut w = [0.0f64; 64];
        let taps = (2 * h) as usize;
        let mut wsum = 0.0;
        for (t, wt) in w.iter_mut().take(taps).enumerate() {
            let k = t as i64 - h + 1;
            *wt = self.weight(frac - k as f64);
            wsum += *wt;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, wt) in w.iter().take(taps).enumerate() {
            let idx = base + t as i64 - h + 1;
            if idx >= 0 && (idx as usize) < line.len() {
                acc += line[idx as usize] * *wt;
            }
        }
        acc / wsum
    }

    /// True if interpolating at `pos` needs no samples beyond the line.
    pub fn fully_inside(&self, len: usize, pos: f64) -> bool {
        let base = pos.floor() as i64;
        base - self.half as i64 + 1 >= 0 && base + self.half as i64 <= len as i64 - 1
    }
}
