//! Periodic numerics on a uniform angular grid `φ_j = 2πj/N`.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Fourth-order central first derivative on a periodic grid with spacing `dx`.
pub fn d1(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            let at = |k: isize| f[(i as isize + k).rem_euclid(n as isize) as usize];
            (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * dx)
        })
        .collect()
}

/// Fourth-order central second derivative on a periodic grid with spacing `dx`.
pub fn d2(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            let at = |k: isize| f[(i as isize + k).rem_euclid(n as isize) as usize];
            (-at(-2) + 16.0 * at(-1) - 30.0 * at(0) + 16.0 * at(1) - at(2)) / (12.0 * dx * dx)
        })
        .collect()
}

fn fft(data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse { planner.plan_fft_inverse(data.len()) } else { planner.plan_fft_forward(data.len()) };
    plan.process(data);
}

/// Signed wavenumber of DFT bin `k` for an even length `n`.
fn wavenumber(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Spectral first and second derivatives (with respect to `φ`) of periodic
/// samples on `[0, 2π)`. The Nyquist mode is dropped from the first
/// derivative and kept in the second.
pub fn spectral_derivatives(f: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = f.len();
    let mut spec: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut spec, false);
    let mut first = spec.clone();
    let mut second = spec;
    for k in 0..n {
        let w = wavenumber(k, n);
        first[k] *= if n.is_multiple_of(2) && k == n / 2 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, w) };
        second[k] *= -w * w;
    }
    fft(&mut first, true);
    fft(&mut second, true);
    let scale = 1.0 / n as f64;
    (first.iter().map(|c| c.re * scale).collect(), second.iter().map(|c| c.re * scale).collect())
}

/// Trigonometric interpolant of real periodic samples on `[0, 2π)`.
#[derive(Debug, Clone)]
pub struct PeriodicInterpolant {
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
    nyquist: f64,
}

impl PeriodicInterpolant {
    pub fn new(samples: &[f64]) -> Self {
        let n = samples.len();
        let mut spec: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft(&mut spec, false);
        let inv = 1.0 / n as f64;
        let half = n.div_ceil(2);
        let mut cos = Vec::with_capacity(half);
        let mut sin = Vec::with_capacity(half);
        for c in spec.iter().take(half).skip(1) {
            cos.push(2.0 * c.re * inv);
            sin.push(-2.0 * c.im * inv);
        }
        let nyquist = if n.is_multiple_of(2) { spec[n / 2].re * inv } else { 0.0 };
        Self { mean: spec[0].re * inv, cos, sin, nyquist }
    }

    fn nyquist_k(&self) -> f64 {
        (self.cos.len() + 1) as f64
    }

    pub fn value(&self, phi: f64) -> f64 {
        let mut v = self.mean;
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kx = (k + 1) as f64 * phi;
            v += a * kx.cos() + b * kx.sin();
        }
        v + self.nyquist * (self.nyquist_k() * phi).cos()
    }

    pub fn derivative(&self, phi: f64) -> f64 {
        let mut v = 0.0;
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kk = (k + 1) as f64;
            let kx = kk * phi;
            v += kk * (b * kx.cos() - a * kx.sin());
        }
        v - self.nyquist * self.nyquist_k() * (self.nyquist_k() * phi).sin()
    }
}
