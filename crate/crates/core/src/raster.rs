//! Two-dimensional complex sample grid carried between processing stages.

use num_complex::{Complex32, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Time,
    Frequency,
    Space,
}

impl Domain {
    pub fn unit(self) -> &'static str {
        match self {
            Domain::Time => "s",
            Domain::Frequency => "Hz",
            Domain::Space => "m",
        }
    }
}

/// Sampling of one raster axis: sample `i` sits at `origin + i·step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisMeta {
    pub domain: Domain,
    pub origin: f64,
    pub step: f64,
    /// For frequency axes, the time instant the spectral phase is referenced
    /// to (the centre of the transformed time window). Unused otherwise.
    #[serde(default)]
    pub conjugate_center: f64,
}

impl AxisMeta {
    pub fn time(origin: f64, step: f64) -> Self {
        AxisMeta {
            domain: Domain::Time,
            origin,
            step,
            conjugate_center: 0.0,
        }
    }

    pub fn coord(&self, i: f64) -> f64 {
        self.origin + i * self.step
    }

    /// Fractional index of coordinate `x`.
    pub fn index_of(&self, x: f64) -> f64 {
        (x - self.origin) / self.step
    }
}

/// Invertible affine map from a pixel index to a physical coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub offset: f64,
    pub scale: f64,
}

impl Affine {
    pub fn apply(&self, i: f64) -> f64 {
        self.offset + self.scale * i
    }

    pub fn invert(&self, x: f64) -> f64 {
        (x - self.offset) / self.scale
    }
}

/// Row-major complex raster; axis 0 (rows) is azimuth, axis 1 is range.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRaster {
    n_az: usize,
    n_rg: usize,
    data: Vec<Complex32>,
    pub axis0: AxisMeta,
    pub axis1: AxisMeta,
    pub stage_tag: String,
}

fn check_axis(name: &str, n: usize, axis: &AxisMeta) -> Result<()> {
    if n < 2 {
        return Err(Error::validation(name, format!("dimension {n} must be >= 2")));
    }
    if !(axis.step.is_finite() && axis.step > 0.0) || !axis.origin.is_finite() {
        return Err(Error::validation(
            name,
            format!("step {} must be finite and > 0", axis.step),
        ));
    }
    Ok(())
}

impl ComplexRaster {
    pub fn zeros(
        n_az: usize,
        n_rg: usize,
        axis0: AxisMeta,
        axis1: AxisMeta,
        stage_tag: impl Into<String>,
    ) -> Result<Self> {
        Self::from_data(
            n_az,
            n_rg,
            vec![Complex32::new(0.0, 0.0); n_az * n_rg],
            axis0,
            axis1,
            stage_tag,
        )
    }

    pub fn from_data(
        n_az: usize,
        n_rg: usize,
        data: Vec<Complex32>,
        axis0: AxisMeta,
        axis1: AxisMeta,
        stage_tag: impl Into<String>,
    ) -> Result<Self> {
        check_axis("axis0", n_az, &axis0)?;
        check_axis("axis1", n_rg, &axis1)?;
        if data.len() != n_az * n_rg {
            return Err(Error::validation(
                "data",
                format!("{} samples for a {n_az}x{n_rg} raster", data.len()),
            ));
        }
        Ok(ComplexRaster {
            n_az,
            n_rg,
            data,
            axis0,
            axis1,
            stage_tag: stage_tag.into(),
        })
    }

    /// Builds a raster row by row; `fill(i, row)` writes row `i` into a
    /// zeroed double-precision buffer.
    pub fn from_rows<F>(
        n_az: usize,
        n_rg: usize,
        axis0: AxisMeta,
        axis1: AxisMeta,
        stage_tag: impl Into<String>,
        fill: F,
    ) -> Result<Self>
    where
        F: Fn(usize, &mut [Complex64]) -> Result<()> + Sync,
    {
        let mut out = Self::zeros(n_az, n_rg, axis0, axis1, stage_tag)?;
        out.data
            .par_chunks_mut(n_rg)
            .enumerate()
            .try_for_each(|(i, row)| {
                let mut buf = vec![Complex64::new(0.0, 0.0); n_rg];
                fill(i, &mut buf)?;
                store(row, &buf);
                Ok::<_, Error>(())
            })?;
        Ok(out)
    }

    pub fn n_az(&self) -> usize {
        self.n_az
    }

    pub fn n_rg(&self) -> usize {
        self.n_rg
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.n_az, self.n_rg]
    }

    pub fn data(&self) -> &[Complex32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex32] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex32> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex32 {
        self.data[i * self.n_rg + j]
    }

    pub fn row(&self, i: usize) -> &[Complex32] {
        &self.data[i * self.n_rg..(i + 1) * self.n_rg]
    }

    pub fn row_f64(&self, i: usize) -> Vec<Complex64> {
        self.row(i).iter().map(|c| widen(*c)).collect()
    }

    pub fn column_f64(&self, j: usize) -> Vec<Complex64> {
        (0..self.n_az).map(|i| widen(self.get(i, j))).collect()
    }

    pub fn energy(&self) -> f64 {
        self.data
            .par_chunks(self.n_rg)
            .map(|row| row.iter().map(|c| widen(*c).norm_sqr()).sum::<f64>())
            .collect::<Vec<_>>()
            .iter()
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm() as f64).fold(0.0, f64::max)
    }

    /// Applies `f(i, row)` to every row in double precision.
    pub fn process_rows<F>(&mut self, f: F) -> Result<()>
    where
        F: Fn(usize, &mut [Complex64]) -> Result<()> + Sync,
    {
        let n = self.n_rg;
        self.data
            .par_chunks_mut(n)
            .enumerate()
            .try_for_each(|(i, row)| {
                let mut buf: Vec<Complex64> = row.iter().map(|c| widen(*c)).collect();
                f(i, &mut buf)?;
                store(row, &buf);
                Ok::<_, Error>(())
            })
    }

    /// Applies `f(j, column)` to every column in double precision.
    pub fn process_columns<F>(&mut self, f: F) -> Result<()>
    where
        F: Fn(usize, &mut [Complex64]) -> Result<()> + Sync,
    {
        self.remap_columns(self.n_az, |j, col, out| {
            out.copy_from_slice(col);
            f(j, out)
        })
    }

    /// Replaces every column by `f(j, column_in, column_out)`, where the
    /// output column holds `n_out` samples.
    pub fn remap_columns<F>(&mut self, n_out: usize, f: F) -> Result<()>
    where
        F: Fn(usize, &[Complex64], &mut [Complex64]) -> Result<()> + Sync,
    {
        let (n_az, n_rg) = (self.n_az, self.n_rg);
        let cols: Vec<Vec<Complex32>> = (0..n_rg)
            .into_par_iter()
            .map(|j| {
                let col: Vec<Complex64> = (0..n_az).map(|i| widen(self.data[i * n_rg + j])).collect();
                let mut out = vec![Complex64::new(0.0, 0.0); n_out];
                f(j, &col, &mut out)?;
                Ok(out.iter().map(|c| narrow(*c)).collect())
            })
            .collect::<Result<_>>()?;
        let mut data = vec![Complex32::new(0.0, 0.0); n_out * n_rg];
        data.par_chunks_mut(n_rg).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = cols[j][i];
            }
        });
        check_axis("axis0", n_out, &self.axis0)?;
        self.data = data;
        self.n_az = n_out;
        Ok(())
    }

    /// Replaces every row by `f(i, row_in, row_out)` with `n_out` samples.
    pub fn remap_rows<F>(&mut self, n_out: usize, f: F) -> Result<()>
    where
        F: Fn(usize, &[Complex64], &mut [Complex64]) -> Result<()> + Sync,
    {
        check_axis("axis1", n_out, &self.axis1)?;
        let n_rg = self.n_rg;
        let mut data = vec![Complex32::new(0.0, 0.0); self.n_az * n_out];
        data.par_chunks_mut(n_out)
            .zip(self.data.par_chunks(n_rg))
            .enumerate()
            .try_for_each(|(i, (dst, src))| {
                let src: Vec<Complex64> = src.iter().map(|c| widen(*c)).collect();
                let mut out = vec![Complex64::new(0.0, 0.0); n_out];
                f(i, &src, &mut out)?;
                store(dst, &out);
                Ok::<_, Error>(())
            })?;
        self.data = data;
        self.n_rg = n_out;
        Ok(())
    }

    pub(crate) fn require_domains(&self, op: &'static str, d0: Domain, d1: Domain) -> Result<()> {
        if self.axis0.domain != d0 || self.axis1.domain != d1 {
            return Err(Error::precondition(
                op,
                format!(
                    "expected ({d0:?}, {d1:?}) axes, got ({:?}, {:?})",
                    self.axis0.domain, self.axis1.domain
                ),
            ));
        }
        Ok(())
    }
}

pub(crate) fn widen(c: Complex32) -> Complex64 {
    Complex64::new(c.re as f64, c.im as f64)
}

pub(crate) fn narrow(c: Complex64) -> Complex32 {
    Complex32::new(c.re as f32, c.im as f32)
}

fn store(dst: &mut [Complex32], src: &[Complex64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d = narrow(*s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raster() -> ComplexRaster {
        let data = (0..12).map(|k| Complex32::new(k as f32, -(k as f32))).collect();
        ComplexRaster::from_data(3, 4, data, AxisMeta::time(0.0, 1.0), AxisMeta::time(0.0, 0.5), "t")
            .unwrap()
    }

    #[test]
    fn rejects_bad_shapes() {
        let ax = AxisMeta::time(0.0, 1.0);
        assert!(ComplexRaster::zeros(1, 4, ax, ax, "").is_err());
        assert!(ComplexRaster::zeros(4, 4, ax, AxisMeta::time(0.0, 0.0), "").is_err());
        assert!(ComplexRaster::from_data(2, 2, vec![], ax, ax, "").is_err());
    }

    #[test]
    fn column_remap_transposes_correctly() {
        let mut r = raster();
        r.remap_columns(2, |_, col, out| {
            out[0] = col[0] + col[2];
            out[1] = col[1];
            Ok(())
        })
        .unwrap();
        assert_eq!(r.dims(), [2, 4]);
        assert_eq!(r.get(0, 1), Complex32::new(10.0, -10.0));
        assert_eq!(r.get(1, 3), Complex32::new(7.0, -7.0));
    }

    #[test]
    fn row_remap_changes_width() {
        let mut r = raster();
        r.remap_rows(2, |_, row, out| {
            out[0] = row[3];
            out[1] = row[0];
            Ok(())
        })
        .unwrap();
        assert_eq!(r.dims(), [3, 2]);
        assert_eq!(r.get(2, 0), Complex32::new(11.0, -11.0));
    }

    #[test]
    fn energy_sums_squares() {
        let e: f64 = (0..12).map(|k| 2.0 * (k * k) as f64).sum();
        assert_eq!(raster().energy(), e);
    }
}
