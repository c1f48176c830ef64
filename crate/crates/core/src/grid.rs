//! Samples on periodic equispaced tensor grids, plus the n-dimensional FFT
//! plumbing used for spectral differentiation and multipliers.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::domain::{BoxDomain, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::spectral::{derivative_factor, Atom, SpectralFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    domain: BoxDomain,
    resolution: Vec<usize>,
    samples: Vec<Complex64>,
}

impl GridFunction {
    /// `samples` are row-major with the last axis fastest.
    pub fn new(domain: BoxDomain, resolution: Vec<usize>, samples: Vec<Complex64>) -> Result<Self> {
        if resolution.len() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), got: resolution.len() });
        }
        if resolution.iter().any(|&r| r == 0) {
            return invalid("grid resolution must be positive");
        }
        let total: usize = resolution.iter().product();
        if samples.len() != total {
            return invalid(format!("expected {total} samples, got {}", samples.len()));
        }
        Ok(GridFunction { domain, resolution, samples })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(domain: BoxDomain, resolution: Vec<usize>, f: F) -> Result<Self> {
        let total: usize = resolution.iter().product();
        let mut samples = Vec::with_capacity(total);
        for flat in 0..total {
            let k = unflatten(flat, &resolution);
            samples.push(f(&domain.grid_point(&k, &resolution)));
        }
        GridFunction::new(domain, resolution, samples)
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn node(&self, k: &[usize]) -> Vec<f64> {
        self.domain.grid_point(k, &self.resolution)
    }

    pub fn get(&self, k: &[usize]) -> Complex64 {
        self.samples[flatten(k, &self.resolution)]
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        self.domain.volume() / self.samples.len() as f64
    }

    /// Periodic (trapezoid) quadrature of `|f|^2`.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_volume()).sqrt()
    }

    /// Discrete Fourier coefficients `c_k = (1/n) sum_x f(x) e^{-i w_k (x - lower)}`,
    /// in FFT order.
    pub fn fourier_coefficients(&self) -> Vec<Complex64> {
        let mut buf = self.samples.clone();
        fft_nd(&mut buf, &self.resolution, false);
        let n = self.samples.len() as f64;
        buf.iter_mut().for_each(|v| *v /= n);
        buf
    }

    /// Applies a Fourier multiplier `m(w)` at the signed grid frequencies
    /// `w_j = 2 pi k_j / L_j`. At an even-resolution Nyquist index the
    /// multiplier is symmetrised, `(m(w) + m(-w)) / 2`, so real inputs
    /// stay real under real-symmetric symbols.
    pub fn apply_multiplier<M: Fn(&[f64]) -> Complex64>(&self, m: M) -> GridFunction {
        let d = self.dim();
        let mut buf = self.samples.clone();
        fft_nd(&mut buf, &self.resolution, false);
        let steps: Vec<f64> = (0..d).map(|j| 2.0 * PI / self.domain.side(j)).collect();
        let mut w = vec![0.0; d];
        let mut nyq = Vec::with_capacity(d);
        for (flat, v) in buf.iter_mut().enumerate() {
            let k = unflatten(flat, &self.resolution);
            nyq.clear();
            for j in 0..d {
                let n = self.resolution[j];
                let s = signed_index(k[j], n);
                w[j] = s as f64 * steps[j];
                if n % 2 == 0 && k[j] == n / 2 {
                    nyq.push(j);
                }
            }
            let factor = if nyq.is_empty() {
                m(&w)
            } else {
                // average over all sign flips of the Nyquist axes
                let combos = 1usize << nyq.len();
                let mut acc = Complex64::new(0.0, 0.0);
                let mut wf = w.clone();
                for mask in 0..combos {
                    for (b, &j) in nyq.iter().enumerate() {
                        wf[j] = if mask >> b & 1 == 1 { -w[j] } else { w[j] };
                    }
                    acc += m(&wf);
                }
                acc / combos as f64
            };
            *v *= factor;
        }
        fft_nd(&mut buf, &self.resolution, true);
        let n = self.samples.len() as f64;
        buf.iter_mut().for_each(|v| *v /= n);
        GridFunction { domain: self.domain.clone(), resolution: self.resolution.clone(), samples: buf }
    }

    /// Spectral derivative `partial^alpha` of the periodic interpolant.
    pub fn derivative(&self, alpha: &MultiIndex) -> GridFunction {
        self.apply_multiplier(|w| derivative_factor(alpha, w))
    }

    /// The trigonometric interpolant as an atom sum. An even-resolution
    /// Nyquist coefficient is split evenly between `+w` and `-w`.
    pub fn to_spectral(&self) -> SpectralFunction {
        let d = self.dim();
        let c = self.fourier_coefficients();
        let steps: Vec<f64> = (0..d).map(|j| 2.0 * PI / self.domain.side(j)).collect();
        let mut atoms = Vec::new();
        for (flat, &v) in c.iter().enumerate() {
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let k = unflatten(flat, &self.resolution);
            let w: Vec<f64> = (0..d).map(|j| signed_index(k[j], self.resolution[j]) as f64 * steps[j]).collect();
            let nyq: Vec<usize> = (0..d)
                .filter(|&j| self.resolution[j] % 2 == 0 && k[j] == self.resolution[j] / 2)
                .collect();
            let combos = 1usize << nyq.len();
            for mask in 0..combos {
                let mut wf = w.clone();
                for (b, &j) in nyq.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        wf[j] = -w[j];
                    }
                }
                let shift: f64 = wf.iter().zip(self.domain.lower()).map(|(a, b)| a * b).sum();
                let amp = v * Complex64::from_polar(1.0, -shift) / combos as f64;
                atoms.push(Atom::new(amp, wf));
            }
        }
        SpectralFunction::new(self.domain.clone(), atoms).expect("grid frequencies are finite")
    }

    /// Fraction of spectral energy in modes with `|k_j| > n_j / 4` on some axis.
    pub fn high_frequency_fraction(&self) -> f64 {
        let c = self.fourier_coefficients();
        let total: f64 = c.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let mut high = 0.0;
        for (flat, v) in c.iter().enumerate() {
            let k = unflatten(flat, &self.resolution);
            let is_high = k
                .iter()
                .zip(&self.resolution)
                .any(|(&kj, &n)| 4 * signed_index(kj, n).unsigned_abs() > n as u64);
            if is_high {
                high += v.norm_sqr();
            }
        }
        high / total
    }
}

pub(crate) fn signed_index(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

pub(crate) fn flatten(k: &[usize], res: &[usize]) -> usize {
    k.iter().zip(res).fold(0, |acc, (&kj, &n)| acc * n + kj)
}

pub(crate) fn unflatten(mut flat: usize, res: &[usize]) -> Vec<usize> {
    let mut k = vec![0; res.len()];
    for j in (0..res.len()).rev() {
        k[j] = flat % res[j];
        flat /= res[j];
    }
    k
}

/// In-place unnormalised n-dimensional FFT over a row-major buffer.
pub fn fft_nd(buf: &mut [Complex64], res: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let d = res.len();
    let total: usize = res.iter().product();
    for axis in 0..d {
        let n = res[axis];
        if n == 1 {
            continue;
        }
        let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
        let stride: usize = res[axis + 1..].iter().product();
        let block = n * stride;
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = buf[outer + inner + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    buf[outer + inner + i * stride] = *v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Differentiable;

    #[test]
    fn flatten_roundtrip() {
        let res = [3, 4, 5];
        for flat in 0..60 {
            assert_eq!(flatten(&unflatten(flat, &res), &res), flat);
        }
    }

    #[test]
    fn spectral_derivative_of_sine() {
        let dom = BoxDomain::cube(1, 0.0, 2.0 * PI).unwrap();
        let g = SpectralFunction::sine(dom, 3.0, 1.0).unwrap().sample(&[64]).unwrap();
        let d = g.derivative(&MultiIndex(vec![1]));
        for k in 0..64 {
            let x = d.node(&[k])[0];
            assert!((d.get(&[k]) - Complex64::new(3.0 * (3.0 * x).cos(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_on_shifted_two_dimensional_box() {
        let dom = BoxDomain::new(vec![-1.0, 0.5], vec![1.0, 2.5]).unwrap();
        let f = SpectralFunction::single(dom, Complex64::new(1.0, 0.0), vec![PI, 2.0 * PI]).unwrap();
        let g = f.sample(&[16, 16]).unwrap();
        let alpha = MultiIndex(vec![1, 1]);
        let d = g.derivative(&alpha);
        for flat in 0..256 {
            let k = unflatten(flat, &[16, 16]);
            let exact = f.derivative(&alpha, &d.node(&k));
            assert!((d.get(&k) - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn l2_norm_of_constant() {
        let g = GridFunction::from_fn(BoxDomain::unit(1), vec![8], |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((g.l2_norm() - 1.0).abs() < 1e-15);
        assert!(g.high_frequency_fraction() == 0.0);
    }

    #[test]
    fn spectral_form_interpolates_and_differentiates() {
        let dom = BoxDomain::new(vec![0.3], vec![0.3 + 2.0 * PI]).unwrap();
        let g = GridFunction::from_fn(dom, vec![16], |x| Complex64::new((3.0 * x[0]).cos() + (8.0 * x[0]).cos(), 0.0)).unwrap();
        let s = g.to_spectral();
        for k in 0..16 {
            let x = g.node(&[k]);
            assert!((s.evaluate(&x).unwrap() - g.get(&[k])).norm() < 1e-12);
        }
        let dg = g.derivative(&MultiIndex(vec![1]));
        for k in 0..16 {
            let x = g.node(&[k]);
            assert!((s.derivative(&MultiIndex(vec![1]), &x) - dg.get(&[k])).norm() < 1e-11);
        }
        // between nodes the interpolant is real for real samples
        assert!(s.evaluate(&[1.234]).unwrap().im.abs() < 1e-12);
    }
}