//! Centred unitary DFT and chirp-z evaluation.
//!
//! With sample `m` of an `N`-point line at time `t_m` and `t_c` the time of
//! sample `N/2`, the forward transform is
//! `X_k = N^{-1/2} Σ_m x_m exp(-j2π (k - N/2)(m - N/2) / N)`,
//! so bin `N/2` holds DC and the phase is referenced to `t_c`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::raster::{AxisMeta, Domain};

#[derive(Clone)]
pub struct CentredFft {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for CentredFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CentredFft").field("n", &self.n).finish()
    }
}

impl CentredFft {
    pub fn new(n: usize, inverse: bool) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::precondition(
                "centred_fft",
                format!("length {n} must be even and >= 2"),
            ));
        }
        let mut planner = FftPlanner::new();
        let fft = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        Ok(CentredFft {
            n,
            fft,
            scale: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn process(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n);
        let h = self.n / 2;
        buf.rotate_left(h);
        self.fft.process(buf);
        buf.rotate_left(h);
        for v in buf.iter_mut() {
            *v *= self.scale;
        }
    }
}

/// Axis metadata after a forward transform of a time axis.
pub fn spectrum_axis(time: &AxisMeta, n: usize) -> AxisMeta {
    let df = 1.0 / (n as f64 * time.step);
    AxisMeta {
        domain: Domain::Frequency,
        origin: -((n / 2) as f64) * df,
        step: df,
        conjugate_center: time.coord((n / 2) as f64),
    }
}

/// Axis metadata after an inverse transform of a frequency axis.
pub fn time_axis(freq: &AxisMeta, n: usize) -> AxisMeta {
    let dt = 1.0 / (n as f64 * freq.step);
    AxisMeta {
        domain: Domain::Time,
        origin: freq.conjugate_center - (n / 2) as f64 * dt,
        step: dt,
        conjugate_center: 0.0,
    }
}

/// Evaluates `Y_k = N^{-1/2} Σ_m x_m exp(-j2π φ_k (m - N/2))` with
/// `φ_k = phi0 + k·dphi` (cycles per sample) for `k = 0..m_out`, using
/// Bluestein's algorithm.
#[derive(Clone)]
pub struct ChirpZ {
    n: usize,
    m_out: usize,
    l: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl ChirpZ {
    pub fn new(n: usize, m_out: usize) -> Self {
        let l = (n + m_out - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        ChirpZ {
            n,
            m_out,
            l,
            fwd: planner.plan_fft_forward(l),
            inv: planner.plan_fft_inverse(l),
        }
    }

    pub fn eval(&self, x: &[Complex64], phi0: f64, dphi: f64, out: &mut [Complex64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.m_out);
        let (n, m_out, l) = (self.n, self.m_out, self.l);
        // exp(jπ·dphi·q²), with q² reduced modulo 2/dphi-free arithmetic
        let chirp = |q: i64| {
            let q2 = (q * q) as f64;
            let ph = PI * (dphi * q2).rem_euclid(2.0);
            Complex64::from_polar(1.0, ph)
        };
        let mut a = vec![Complex64::new(0.0, 0.0); l];
        for (m, (am, xm)) in a.iter_mut().zip(x).enumerate() {
            let lin = (phi0 * m as f64).rem_euclid(1.0);
            *am = xm * Complex64::from_polar(1.0, -2.0 * PI * lin) * chirp(m as i64).conj();
        }
        let mut b = vec![Complex64::new(0.0, 0.0); l];
        for q in 0..m_out {
            b[q] = chirp(q as i64);
        }
        for q in 1..n {
            b[l - q] = chirp(q as i64);
        }
        self.fwd.process(&mut a);
        self.fwd.process(&mut b);
        for (av, bv) in a.iter_mut().zip(&b) {
            *av *= bv;
        }
        self.inv.process(&mut a);
        let norm = 1.0 / (l as f64 * (n as f64).sqrt());
        let h = (n / 2) as f64;
        for (k, o) in out.iter_mut().enumerate() {
            let phi = phi0 + k as f64 * dphi;
            let centre = Complex64::from_polar(1.0, 2.0 * PI * (phi * h).rem_euclid(1.0));
            *o = a[k] * chirp(k as i64).conj() * centre * norm;
        }
    }
}
