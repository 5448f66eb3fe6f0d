//! Fourier differentiation on uniform periodic grids.
//!
//! A field sampled at N uniform nodes of a T-periodic line is differentiated
//! by FFT, multiplication with `i k`, and inverse FFT, with wavenumbers
//! `k = 2 pi / T * [0, 1, ..., N/2-1, 0, -N/2+1, ..., -1]`. The Nyquist mode
//! is zeroed, which is the correct convention for odd-order derivatives of
//! real data on even grids. The result is exact (to rounding) for
//! trigonometric polynomials of degree below N/2.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// First-derivative operator for one periodic line length.
pub struct LineDiff {
    n: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    ik: Vec<Complex64>,
}

impl LineDiff {
    pub fn new(n: usize, period: f64) -> Self {
        assert!(n >= 2 && n.is_multiple_of(2), "grid length must be even and >= 2");
        assert!(period > 0.0, "period must be positive");
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(n);
        let ifft = planner.plan_fft_inverse(n);
        let dk = 2.0 * PI / period;
        let mut ik = vec![Complex64::new(0.0, 0.0); n];
        for (j, slot) in ik.iter_mut().enumerate() {
            let m = if j < n / 2 {
                j as f64
            } else if j == n / 2 {
                0.0 // Nyquist
            } else {
                j as f64 - n as f64
            };
            *slot = Complex64::new(0.0, m * dk);
        }
        LineDiff { n, fft, ifft, ik }
    }

    /// Differentiate one complex line in place.
    pub fn apply(&self, line: &mut [Complex64]) {
        debug_assert_eq!(line.len(), self.n);
        self.fft.process(line);
        let scale = 1.0 / self.n as f64;
        for (value, ik) in line.iter_mut().zip(&self.ik) {
            *value *= ik * scale;
        }
        self.ifft.process(line);
    }

    /// Differentiate a real line.
    pub fn apply_real(&self, line: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = line.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.apply(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }
}

/// Spectral d/du and d/dv for scalar fields stored with index `a * nv + b`
/// (u-index major, v-index contiguous).
pub struct FieldDiff {
    pub nu: usize,
    pub nv: usize,
    along_u: LineDiff,
    along_v: LineDiff,
}

impl FieldDiff {
    pub fn new(nu: usize, nv: usize, tu: f64, tv: f64) -> Self {
        FieldDiff { nu, nv, along_u: LineDiff::new(nu, tu), along_v: LineDiff::new(nv, tv) }
    }

    pub fn d_du(&self, field: &[f64]) -> Vec<f64> {
        assert_eq!(field.len(), self.nu * self.nv);
        let mut out = vec![0.0; field.len()];
        let mut line = vec![Complex64::new(0.0, 0.0); self.nu];
        for b in 0..self.nv {
            for a in 0..self.nu {
                line[a] = Complex64::new(field[a * self.nv + b], 0.0);
            }
            self.along_u.apply(&mut line);
            for a in 0..self.nu {
                out[a * self.nv + b] = line[a].re;
            }
        }
        out
    }

    pub fn d_dv(&self, field: &[f64]) -> Vec<f64> {
        assert_eq!(field.len(), self.nu * self.nv);
        let mut out = vec![0.0; field.len()];
        let mut line = vec![Complex64::new(0.0, 0.0); self.nv];
        for a in 0..self.nu {
            let row = &field[a * self.nv..(a + 1) * self.nv];
            for (b, slot) in line.iter_mut().enumerate() {
                *slot = Complex64::new(row[b], 0.0);
            }
            self.along_v.apply(&mut line);
            for b in 0..self.nv {
                out[a * self.nv + b] = line[b].re;
            }
        }
        out
    }

    pub fn d_du_complex(&self, field: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(field.len(), self.nu * self.nv);
        let mut out = vec![Complex64::new(0.0, 0.0); field.len()];
        let mut line = vec![Complex64::new(0.0, 0.0); self.nu];
        for b in 0..self.nv {
            for a in 0..self.nu {
                line[a] = field[a * self.nv + b];
            }
            self.along_u.apply(&mut line);
            for a in 0..self.nu {
                out[a * self.nv + b] = line[a];
            }
        }
        out
    }

    pub fn d_dv_complex(&self, field: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(field.len(), self.nu * self.nv);
        let mut out = vec![Complex64::new(0.0, 0.0); field.len()];
        let mut line = vec![Complex64::new(0.0, 0.0); self.nv];
        for a in 0..self.nu {
            line.copy_from_slice(&field[a * self.nv..(a + 1) * self.nv]);
            self.along_v.apply(&mut line);
            out[a * self.nv..(a + 1) * self.nv].copy_from_slice(&line);
        }
        out
    }
}

/// Compensated (Neumaier) sum in a fixed order; keeps quadrature results
/// bit-reproducible regardless of how callers parallelize around it.
pub fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn derivative_of_sine_line() {
        let n = 64;
        let t = 2.0 * PI;
        let d = LineDiff::new(n, t);
        let line: Vec<f64> = (0..n).map(|j| (3.0 * (j as f64) * t / n as f64).sin()).collect();
        let deriv = d.apply_real(&line);
        for (j, &got) in deriv.iter().enumerate() {
            let x = j as f64 * t / n as f64;
            assert!((got - 3.0 * (3.0 * x).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let d = LineDiff::new(32, 5.0);
        for &y in d.apply_real(&vec![7.5; 32]).iter() {
            assert!(y.abs() < 1e-13);
        }
    }

    proptest! {
        // Spectral derivative of a random band-limited field is exact.
        #[test]
        fn exact_on_trig_polynomials(
            coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..10),
            period in 0.5f64..20.0,
        ) {
            let n = 64;
            let d = LineDiff::new(n, period);
            let omega = 2.0 * PI / period;
            let f = |x: f64| -> f64 {
                coeffs.iter().enumerate()
                    .map(|(m, (a, b))| {
                        let k = (m + 1) as f64 * omega;
                        a * (k * x).cos() + b * (k * x).sin()
                    })
                    .sum()
            };
            let fp = |x: f64| -> f64 {
                coeffs.iter().enumerate()
                    .map(|(m, (a, b))| {
                        let k = (m + 1) as f64 * omega;
                        -a * k * (k * x).sin() + b * k * (k * x).cos()
                    })
                    .sum()
            };
            let line: Vec<f64> = (0..n).map(|j| f(j as f64 * period / n as f64)).collect();
            let deriv = d.apply_real(&line);
            let scale: f64 = deriv.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for (j, &got) in deriv.iter().enumerate() {
                let x = j as f64 * period / n as f64;
                prop_assert!((got - fp(x)).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn field_diff_mixed_partials_commute() {
        let (nu, nv) = (32, 16);
        let (tu, tv) = (2.0 * PI, 4.0);
        let fd = FieldDiff::new(nu, nv, tu, tv);
        let mut field = vec![0.0; nu * nv];
        for a in 0..nu {
            for b in 0..nv {
                let u = a as f64 * tu / nu as f64;
                let v = b as f64 * tv / nv as f64;
                field[a * nv + b] = (2.0 * u).sin() * (2.0 * PI * v / tv).cos() + u.cos();
            }
        }
        let duv = fd.d_dv(&fd.d_du(&field));
        let dvu = fd.d_du(&fd.d_dv(&field));
        for (x, y) in duv.iter().zip(&dvu) {
            assert!((x - y).abs() < 1e-11);
        }
    }

    #[test]
    fn compensated_sum_handles_cancellation() {
        let xs = vec![1.0e16, 1.0, -1.0e16, 1.0];
        assert_eq!(compensated_sum(xs.into_iter()), 2.0);
    }
}
