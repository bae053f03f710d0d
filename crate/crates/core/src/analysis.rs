//! Focus-quality measurements and independent reference computations.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::azcomp::{Algo, FocusedImage, ImageMeta};
use crate::error::{Error, Result};
use crate::fft::CentredFft;
use crate::geometry::{AcquisitionGeometry, PointTarget, RadarParams, SPEED_OF_LIGHT};
use crate::interp::Interpolator;
use crate::raster::{Affine, AxisMeta, ComplexRaster, Domain};
use crate::rangeproc::ScaledConstants;

/// Upsampling factor applied to IRF cuts.
const CUT_UPSAMPLE: usize = 16;

/// Extent of the sidelobe region on each side, in −3 dB widths (so the
/// whole region spans 20 widths).
const SIDELOBE_WIDTHS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrfReport {
    /// Interpolated peak in image coordinates (m).
    pub peak_xy: (f64, f64),
    /// Interpolated peak in fractional pixels (row, column).
    pub peak_px: (f64, f64),
    /// −3 dB widths (m, image coordinates).
    pub width_az: f64,
    pub width_rg: f64,
    pub pslr_az: f64,
    pub pslr_rg: f64,
    pub islr_az: f64,
    pub islr_rg: f64,
    pub peak_mag: f64,
}

/// One-dimensional cut statistics, in pixels and dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutMetrics {
    pub peak: f64,
    pub width: f64,
    pub pslr: f64,
    pub islr: f64,
    pub peak_mag: f64,
}

pub fn irf_metrics(img: &FocusedImage, approx_xy: (f64, f64), window_cells: usize) -> Result<IrfReport> {
    let (pr, pc) = img.pixel_of(approx_xy.0, approx_xy.1)?;
    let r = &img.raster;
    let w = window_cells as i64;
    let (r0, c0) = (pr.round() as i64, pc.round() as i64);
    let rows = (r0 - w).max(0)..=(r0 + w).min(r.n_az() as i64 - 1);
    let cols = (c0 - w).max(0)..=(c0 + w).min(r.n_rg() as i64 - 1);
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::PeakNotFound(format!(
            "near ({:.3}, {:.3}) m: window lies outside the image",
            approx_xy.0, approx_xy.1
        )));
    }
    let mut best = (0.0f64, 0usize, 0usize);
    for i in rows.clone() {
        for j in cols.clone() {
            let p = r.get(i as usize, j as usize).norm_sqr() as f64;
            if p > best.0 {
                best = (p, i as usize, j as usize);
            }
        }
    }
    let (pk, bi, bj) = best;
    let interior = |v: usize, range: &std::ops::RangeInclusive<i64>, n: usize| {
        let v = v as i64;
        (v > *range.start() || v == 0) && (v < *range.end() || v == n as i64 - 1)
    };
    if pk == 0.0 || !interior(bi, &rows, r.n_az()) || !interior(bj, &cols, r.n_rg()) {
        return Err(Error::PeakNotFound(format!(
            "within {window_cells} cells of ({:.3}, {:.3}) m",
            approx_xy.0, approx_xy.1
        )));
    }
    let az = cut_metrics(&r.column_f64(bj), bi)?;
    let rg = cut_metrics(&r.row_f64(bi), bj)?;
    let (x, y) = img.xy_at(az.peak, rg.peak)?;
    let (xm, ym) = (img.meta.x_map.unwrap(), img.meta.y_map.unwrap());
    Ok(IrfReport {
        peak_xy: (x, y),
        peak_px: (az.peak, rg.peak),
        width_az: az.width * xm.scale.abs(),
        width_rg: rg.width * ym.scale.abs(),
        pslr_az: az.pslr,
        pslr_rg: rg.pslr,
        islr_az: az.islr,
        islr_rg: rg.islr,
        peak_mag: az.peak_mag.max(rg.peak_mag),
    })
}

/// Metrics of a one-dimensional impulse response whose maximum sample is
/// `at`. The line is upsampled by band-limited (DFT) interpolation first.
pub fn cut_metrics(line: &[Complex64], at: usize) -> Result<CutMetrics> {
    let n = line.len();
    if n < 4 || at >= n {
        return Err(Error::PeakNotFound("cut too short".into()));
    }
    let u = CUT_UPSAMPLE;
    let up: Vec<f64> = upsample(line, u).iter().map(|c| c.norm()).collect();
    let m = up.len() as i64;
    let get = |i: i64| up[i.rem_euclid(m) as usize];
    let centre = (at * u) as i64;
    let mut p = centre;
    for i in centre - u as i64..=centre + u as i64 {
        if get(i) > get(p) {
            p = i;
        }
    }
    let peak = get(p);
    if peak == 0.0 {
        return Err(Error::PeakNotFound("zero cut".into()));
    }
    // parabolic refinement on the upsampled magnitude squared
    let (a, b, c) = (get(p - 1).powi(2), peak.powi(2), get(p + 1).powi(2));
    let den = a - 2.0 * b + c;
    let frac = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
    let peak_pos = (p as f64 + frac) / u as f64;

    let level = peak / 2f64.sqrt();
    let crossing = |dir: i64| -> Result<f64> {
        let mut i = p;
        for _ in 0..m {
            let next = i + dir;
            if get(next) < level {
                let (v0, v1) = (get(i), get(next));
                return Ok(i as f64 + dir as f64 * (v0 - level) / (v0 - v1));
            }
            i = next;
        }
        Err(Error::PeakNotFound("no −3 dB crossing".into()))
    };
    let width_up = crossing(1)? - crossing(-1)?;
    let null = |dir: i64| {
        let mut i = p;
        while (i - p).abs() < m / 2 && get(i + dir) < get(i) {
            i += dir;
        }
        i
    };
    let (nl, nr) = (null(-1), null(1));
    let reach = (SIDELOBE_WIDTHS * width_up).ceil() as i64;
    let (mut side_max, mut side_e, mut main_e) = (0.0f64, 0.0, 0.0);
    for i in p - reach.min(m / 2 - 1)..=p + reach.min(m / 2 - 1) {
        let v = get(i);
        if i > nl && i < nr {
            main_e += v * v;
        } else {
            side_max = side_max.max(v);
            side_e += v * v;
        }
    }
    Ok(CutMetrics {
        peak: peak_pos,
        width: width_up / u as f64,
        pslr: 20.0 * (side_max / peak).log10(),
        islr: 10.0 * (side_e / main_e).log10(),
        peak_mag: peak,
    })
}

/// Band-limited upsampling by `factor`. Zeros are inserted opposite the
/// spectral energy centroid so that offset spectra are not split; the
/// centroid moves continuously with the data, unlike a minimum search over a
/// flat gap.
pub fn upsample(line: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = line.len();
    let mut planner = FftPlanner::new();
    let mut spec = line.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);
    let centre: Complex64 = spec
        .iter()
        .enumerate()
        .map(|(k, c)| Complex64::from_polar(c.norm_sqr(), 2.0 * PI * k as f64 / n as f64))
        .sum();
    let turns = centre.arg() / (2.0 * PI) + 0.5;
    let gap = ((turns * n as f64).round() as i64).rem_euclid(n as i64);
    let big = n * factor;
    let mut out = vec![Complex64::new(0.0, 0.0); big];
    for (k, v) in spec.iter().enumerate() {
        let f = if k as i64 <= gap { k as i64 } else { k as i64 - n as i64 };
        out[f.rem_euclid(big as i64) as usize] = *v / n as f64;
    }
    planner.plan_fft_inverse(big).process(&mut out);
    out
}

/// Azimuth coordinate at which a target at along-track `x_t` appears in a
/// classic (spectral-analysis) image.
///
/// After range processing the target is an azimuth tone of frequency
/// `2v·x_t/(λ̄R_c)`; sampling at the PRF wraps it into `(−PRF/2, PRF/2]`.
pub fn predict_alias_position(
    x_t: f64,
    geom: &AcquisitionGeometry,
    radar: &RadarParams,
    sc: &ScaledConstants,
) -> f64 {
    let k = sc.lambda_bar * geom.centre_orbit_radius / (2.0 * geom.speed);
    let f = x_t / k;
    let prf = radar.prf;
    let wrapped = f - prf * ((f - 0.5 * prf) / prf).ceil();
    wrapped * k
}

/// Short-time power spectrum along axis 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    /// Frame centre times (s).
    pub times: Vec<f64>,
    /// Bin frequencies (Hz), increasing, DC in the middle.
    pub freqs: Vec<f64>,
    /// `power[frame][bin]`.
    pub power: Vec<Vec<f64>>,
}

/// Spectrogram of a single azimuth signal sampled at `axis`.
pub fn spectrogram(signal: &[Complex64], axis: &AxisMeta, win_len: usize, hop: usize) -> Result<Spectrogram> {
    stft_power(&[signal.to_vec()], axis, win_len, hop)
}

/// Spectrogram of a raster along axis 0, with the power of all columns
/// added together.
pub fn raster_spectrogram(r: &ComplexRaster, win_len: usize, hop: usize) -> Result<Spectrogram> {
    if r.axis0.domain != Domain::Time {
        return Err(Error::precondition("spectrogram", "axis 0 must be time"));
    }
    let cols: Vec<Vec<Complex64>> = (0..r.n_rg())
        .map(|j| r.column_f64(j))
        .filter(|c| c.iter().any(|v| v.norm_sqr() > 0.0))
        .collect();
    stft_power(&cols, &r.axis0, win_len, hop)
}

fn stft_power(lines: &[Vec<Complex64>], axis: &AxisMeta, win_len: usize, hop: usize) -> Result<Spectrogram> {
    let n = lines.first().map_or(0, |l| l.len());
    if win_len < 2 || win_len % 2 != 0 || win_len > n {
        return Err(Error::validation(
            "win_len",
            format!("{win_len} must be even, >= 2 and <= the signal length {n}"),
        ));
    }
    if hop == 0 {
        return Err(Error::validation("hop", "must be >= 1"));
    }
    let fft = CentredFft::new(win_len, false)?;
    let window: Vec<f64> = (0..win_len)
        .map(|k| 0.5 - 0.5 * (2.0 * PI * (k as f64 + 0.5) / win_len as f64).cos())
        .collect();
    let starts: Vec<usize> = (0..=n - win_len).step_by(hop).collect();
    let power: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&s| {
            let mut acc = vec![0.0; win_len];
            let mut buf = vec![Complex64::new(0.0, 0.0); win_len];
            for line in lines {
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = line[s + k] * window[k];
                }
                fft.process(&mut buf);
                for (a, b) in acc.iter_mut().zip(&buf) {
                    *a += b.norm_sqr();
                }
            }
            acc
        })
        .collect();
    let rate = 1.0 / axis.step;
    Ok(Spectrogram {
        times: starts.iter().map(|&s| axis.coord(s as f64 + 0.5 * win_len as f64)).collect(),
        freqs: (0..win_len).map(|k| (k as f64 - (win_len / 2) as f64) * rate / win_len as f64).collect(),
        power,
    })
}

impl Spectrogram {
    fn rate(&self) -> f64 {
        (self.freqs[1] - self.freqs[0]) * self.freqs.len() as f64
    }

    fn active_frames(&self) -> impl Iterator<Item = usize> + '_ {
        let total: Vec<f64> = self.power.iter().map(|p| p.iter().sum()).collect();
        let max = total.iter().cloned().fold(0.0, f64::max);
        (0..self.power.len()).filter(move |&i| max > 0.0 && total[i] > 1e-6 * max)
    }

    /// Strongest frequency of each frame with signal, unwrapped across frames.
    pub fn ridge(&self) -> Vec<(f64, f64)> {
        let w = self.freqs.len();
        let df = self.freqs[1] - self.freqs[0];
        let raw = self.active_frames().map(|i| {
            let p = &self.power[i];
            let k = (0..w).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
            let (a, b, c) = (p[(k + w - 1) % w], p[k], p[(k + 1) % w]);
            let den = a - 2.0 * b + c;
            let d = if den != 0.0 { 0.5 * (a - c) / den } else { 0.0 };
            (self.times[i], self.freqs[k] + d * df)
        });
        unwrap_track(raw.collect(), self.rate())
    }

    /// Power-weighted circular mean frequency of each frame with signal
    /// (the instantaneous Doppler centroid), unwrapped across frames.
    pub fn centroid_track(&self) -> Vec<(f64, f64)> {
        let rate = self.rate();
        let raw = self.active_frames().map(|i| {
            let z: Complex64 = self.power[i]
                .iter()
                .zip(&self.freqs)
                .map(|(p, f)| Complex64::from_polar(*p, 2.0 * PI * f / rate))
                .sum();
            (self.times[i], z.arg() / (2.0 * PI) * rate)
        });
        unwrap_track(raw.collect(), rate)
    }
}

fn unwrap_track(mut track: Vec<(f64, f64)>, rate: f64) -> Vec<(f64, f64)> {
    let mut offset = 0.0;
    for i in 1..track.len() {
        let prev = track[i - 1].1;
        let mut f = track[i].1 + offset;
        while f - prev > 0.5 * rate {
            f -= rate;
            offset -= rate;
        }
        while prev - f > 0.5 * rate {
            f += rate;
            offset += rate;
        }
        track[i].1 = f;
    }
    track
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn fit_line(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::Numerical("line fit needs two points".into()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Numerical("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Output grid of the backprojection reference, in Earth-centred `x` and
/// `y`; `z` follows from the sphere (positive side).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackprojectionGrid {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

pub const MAX_ORACLE_SIDE: usize = 256;

impl BackprojectionGrid {
    /// Grid of `n × n` cells centred on `tgt`'s `(x, y)`.
    pub fn around(tgt: &PointTarget, dx: f64, dy: f64, n: usize) -> Self {
        BackprojectionGrid {
            x0: tgt.x(),
            y0: tgt.y(),
            dx,
            dy,
            nx: n,
            ny: n,
        }
    }

    fn axes(&self) -> (AxisMeta, AxisMeta) {
        let space = |c: f64, d: f64, n: usize| AxisMeta {
            domain: Domain::Space,
            origin: c - (n / 2) as f64 * d,
            step: d,
            conjugate_center: 0.0,
        };
        (space(self.x0, self.dx, self.nx), space(self.y0, self.dy, self.ny))
    }
}

/// Brute-force time-domain matched filter. Returns the image and the number
/// of grid points skipped because their echo left the recorded window.
pub fn backprojection_oracle(
    raw: &ComplexRaster,
    grid: &BackprojectionGrid,
    geom: &AcquisitionGeometry,
    radar: &RadarParams,
    kernel: &Interpolator,
) -> Result<(FocusedImage, usize)> {
    raw.require_domains("backprojection_oracle", Domain::Time, Domain::Time)?;
    if grid.nx > MAX_ORACLE_SIDE || grid.ny > MAX_ORACLE_SIDE {
        return Err(Error::validation(
            "grid",
            format!("{}x{} exceeds the {MAX_ORACLE_SIDE}x{MAX_ORACLE_SIDE} limit", grid.nx, grid.ny),
        ));
    }
    let (ax, ay) = grid.axes();
    let rows: Vec<Vec<Complex64>> = (0..raw.n_az()).map(|i| raw.row_f64(i)).collect();
    let live: Vec<usize> = (0..raw.n_az()).filter(|&i| rows[i].iter().any(|v| v.norm_sqr() > 0.0)).collect();
    let r0sq = geom.earth_radius * geom.earth_radius;
    let skipped = std::sync::atomic::AtomicUsize::new(0);
    let img = ComplexRaster::from_rows(grid.nx, grid.ny, ax, ay, "backprojection", |i, out| {
        let x = ax.coord(i as f64);
        for (j, o) in out.iter_mut().enumerate() {
            let y = ay.coord(j as f64);
            let z2 = r0sq - x * x - y * y;
            if z2 < 0.0 {
                skipped.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                continue;
            }
            let p = PointTarget {
                position: [x, y, z2.sqrt()],
                amplitude: Complex64::new(1.0, 0.0),
            };
            let mut acc = Complex64::new(0.0, 0.0);
            let mut inside = true;
            for &n in &live {
                let t_a = raw.axis0.coord(n as f64);
                let r = geom.range_history(t_a, &p);
                let pos = raw.axis1.index_of(2.0 * r / SPEED_OF_LIGHT);
                if !kernel.fully_inside(raw.n_rg(), pos) {
                    inside = false;
                    break;
                }
                let cycles = (2.0 * radar.carrier_frequency * r / SPEED_OF_LIGHT).rem_euclid(1.0);
                acc += kernel.eval(&rows[n], pos) * Complex64::from_polar(1.0, 2.0 * PI * cycles);
            }
            if inside {
                *o = acc;
            } else {
                skipped.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            }
        }
        Ok(())
    })?;
    let skipped = skipped.into_inner();
    if skipped > 0 {
        log::warn!("backprojection skipped {skipped} grid points outside the range window");
    }
    let meta = ImageMeta {
        algo: Algo::Backprojection,
        mode: geom.mode,
        x_map: Some(Affine {
            offset: ax.origin,
            scale: ax.step,
        }),
        y_map: Some(Affine {
            offset: ay.origin,
            scale: ay.step,
        }),
        x_scale: 1.0,
    };
    Ok((FocusedImage { raster: img, meta }, skipped))
}

/// Range peak positions of a target in consecutive azimuth sub-apertures of
/// decoupled (Keystone output) data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MigrationReport {
    /// Sub-look centre times (s).
    pub look_times: Vec<f64>,
    /// Range peak of each look, in fractional range pixels.
    pub positions: Vec<f64>,
    /// Change of the fitted linear trend between the first and last look
    /// centres, in range pixels.
    pub drift_px: f64,
}

/// Splits `[t_start, t_end]` into `looks` sub-apertures, range-compresses
/// each row, adds the row powers of each look and tracks the range peak
/// within `search` pixels of `near_col`.
pub fn subaperture_range_migration(
    dec: &ComplexRaster,
    t_start: f64,
    t_end: f64,
    looks: usize,
    near_col: f64,
    search: usize,
) -> Result<MigrationReport> {
    dec.require_domains("subaperture_range_migration", Domain::Time, Domain::Frequency)?;
    if looks < 2 {
        return Err(Error::validation("looks", "need at least two sub-looks"));
    }
    let ifft = CentredFft::new(dec.n_rg(), true)?;
    let ax = dec.axis0;
    let i0 = ax.index_of(t_start).ceil().max(0.0) as usize;
    let i1 = (ax.index_of(t_end).floor() as usize).min(dec.n_az() - 1);
    if i1 <= i0 + looks {
        return Err(Error::validation("t_start/t_end", "sub-aperture span too short"));
    }
    let per = (i1 - i0 + 1) / looks;
    let mut look_times = Vec::with_capacity(looks);
    let mut positions = Vec::with_capacity(looks);
    for l in 0..looks {
        let (a, b) = (i0 + l * per, i0 + (l + 1) * per);
        let profile = (a..b)
            .into_par_iter()
            .map(|i| {
                let mut row = dec.row_f64(i);
                ifft.process(&mut row);
                row.iter().map(|v| v.norm_sqr()).collect::<Vec<f64>>()
            })
            .reduce(
                || vec![0.0; dec.n_rg()],
                |mut x, y| {
                    for (p, q) in x.iter_mut().zip(&y) {
                        *p += q;
                    }
                    x
                },
            );
        let c = near_col.round() as i64;
        let lo = (c - search as i64).max(1) as usize;
        let hi = ((c + search as i64) as usize).min(dec.n_rg() - 2);
        let k = (lo..=hi)
            .max_by(|&x, &y| profile[x].total_cmp(&profile[y]))
            .ok_or_else(|| Error::PeakNotFound("empty search range".into()))?;
        let (p0, p1, p2) = (profile[k - 1], profile[k], profile[k + 1]);
        let den = p0 - 2.0 * p1 + p2;
        let d = if den != 0.0 { 0.5 * (p0 - p2) / den } else { 0.0 };
        look_times.push(ax.coord(0.5 * (a + b - 1) as f64));
        positions.push(k as f64 + d);
    }
    let pts: Vec<(f64, f64)> = look_times.iter().cloned().zip(positions.iter().cloned()).collect();
    let (slope, _) = fit_line(&pts)?;
    let drift_px = slope * (look_times[looks - 1] - look_times[0]);
    Ok(MigrationReport {
        look_times,
        positions,
        drift_px,
    })
}
