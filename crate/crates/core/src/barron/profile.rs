//! Frequency profiles `f^` with their spatial counterparts.
//!
//! Fourier convention: `f^(xi) = (2 pi)^{-d/2} int f(x) exp(-i x . xi) dx`,
//! inverse with `exp(+i x . xi)` and the same prefactor.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{BoxDomain, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::gevrey::hermite;
use crate::grid::{flatten, unflatten};
use crate::numeric::GaussLegendre;
use crate::spectral::{derivative_factor, Differentiable};

/// One term `weight * exp(-a |x - center|^2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianTerm {
    pub weight: f64,
    pub a: f64,
    pub center: Vec<f64>,
}

/// Frequency-side activation `sigma^(t) = (1 + t^2)^{-s/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaHat {
    pub s: f64,
}

impl Default for SigmaHat {
    fn default() -> Self {
        SigmaHat { s: 2.0 }
    }
}

impl SigmaHat {
    pub fn eval(&self, t: f64) -> f64 {
        if self.s == 2.0 {
            1.0 / (1.0 + t * t)
        } else {
            (1.0 + t * t).powf(-0.5 * self.s)
        }
    }
}

/// `coef * sigma^(<w, xi> + b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DictionaryAtom {
    pub w: Vec<f64>,
    pub b: f64,
    pub coef: f64,
}

/// Samples on the nodes `lower + k (upper - lower) / (res - 1)` (endpoints
/// included), multilinearly interpolated and zero outside the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GriddedProfile {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub resolution: Vec<usize>,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FourierProfile {
    /// Mixture of Gaussians; `f^` is a sum of shifted Gaussians.
    Gaussian { terms: Vec<GaussianTerm> },
    /// `amplitude * prod_j (1 + cos(pi xi_j / Omega)) / 2` on `[-Omega, Omega]^d`.
    RaisedCosine { omega: f64, d: usize, amplitude: f64 },
    /// `amplitude * prod_j exp(1 - 1 / (1 - (xi_j / Omega)^2))` on `[-Omega, Omega]^d`.
    CompactBump { omega: f64, d: usize, amplitude: f64 },
    Gridded(GriddedProfile),
    /// `sum_n coef_n sigma^(<w_n, xi> + b_n)` restricted to `[-Omega, Omega]^d`.
    Dictionary { omega: f64, d: usize, sigma: SigmaHat, atoms: Vec<DictionaryAtom> },
}

impl FourierProfile {
    /// `exp(-a |x|^2)` in `d` dimensions.
    pub fn gaussian(a: f64, d: usize) -> Self {
        FourierProfile::Gaussian { terms: vec![GaussianTerm { weight: 1.0, a, center: vec![0.0; d] }] }
    }

    /// `sum_k w_k exp(-4^k |x - center|^2)`, `k < levels`, weighted so the
    /// transform stays near `exp(-decay sqrt|xi|)`: component `k` peaks at
    /// `exp(-decay sqrt(2^{k+1}))` and spreads to `|xi| ~ 2^{k+1}`. The
    /// Barron norm under `exp(c |xi|^{1/2})` is finite for `c < decay`, and
    /// greedy errors decay like `exp(-c' sqrt N)` rather than geometrically.
    pub fn gaussian_scale_mixture(decay: f64, levels: u32, center: Vec<f64>) -> Self {
        let d = center.len() as f64;
        let terms = (0..levels)
            .map(|k| {
                let a = 4f64.powi(k as i32);
                let peak = (-decay * 2f64.powf(0.5 * (k as f64 + 1.0))).exp();
                GaussianTerm { weight: (2.0 * a).powf(0.5 * d) * peak, a, center: center.clone() }
            })
            .collect();
        FourierProfile::Gaussian { terms }
    }

    pub fn raised_cosine(omega: f64, d: usize) -> Self {
        FourierProfile::RaisedCosine { omega, d, amplitude: 1.0 }
    }

    pub fn compact_bump(omega: f64, d: usize) -> Self {
        FourierProfile::CompactBump { omega, d, amplitude: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, name: &str| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                invalid(format!("{name} must be positive, got {v}"))
            }
        };
        match self {
            FourierProfile::Gaussian { terms } => {
                let d = terms.first().map(|t| t.center.len()).unwrap_or(0);
                if d == 0 {
                    return invalid("Gaussian mixture needs at least one term with a centre");
                }
                for t in terms {
                    pos(t.a, "Gaussian rate a")?;
                    if t.center.len() != d {
                        return Err(Error::DimensionMismatch { expected: d, got: t.center.len() });
                    }
                    if !t.weight.is_finite() {
                        return invalid("Gaussian weight must be finite");
                    }
                }
                Ok(())
            }
            FourierProfile::RaisedCosine { omega, d, amplitude } | FourierProfile::CompactBump { omega, d, amplitude } => {
                pos(*omega, "Omega")?;
                if *d == 0 || !amplitude.is_finite() {
                    return invalid("dimension must be positive and amplitude finite");
                }
                Ok(())
            }
            FourierProfile::Gridded(g) => {
                let d = g.lower.len();
                if d == 0 || g.upper.len() != d || g.resolution.len() != d {
                    return invalid("gridded profile: inconsistent dimensions");
                }
                if g.resolution.iter().any(|&r| r < 2) {
                    return invalid("gridded profile needs at least 2 nodes per axis");
                }
                if g.lower.iter().zip(&g.upper).any(|(a, b)| !(a < b)) {
                    return invalid("gridded profile: need lower < upper");
                }
                if g.values.len() != g.resolution.iter().product::<usize>() {
                    return invalid("gridded profile: value count does not match resolution");
                }
                Ok(())
            }
            FourierProfile::Dictionary { omega, d, atoms, .. } => {
                pos(*omega, "Omega")?;
                if atoms.iter().any(|a| a.w.len() != *d) {
                    return Err(Error::DimensionMismatch { expected: *d, got: atoms[0].w.len() });
                }
                Ok(())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FourierProfile::Gaussian { terms } => terms.first().map(|t| t.center.len()).unwrap_or(0),
            FourierProfile::RaisedCosine { d, .. } | FourierProfile::CompactBump { d, .. } => *d,
            FourierProfile::Gridded(g) => g.lower.len(),
            FourierProfile::Dictionary { d, .. } => *d,
        }
    }

    /// Compact support box of `f^`, if any.
    pub fn support(&self) -> Option<BoxDomain> {
        match self {
            FourierProfile::Gaussian { .. } => None,
            FourierProfile::RaisedCosine { omega, d, .. }
            | FourierProfile::CompactBump { omega, d, .. }
            | FourierProfile::Dictionary { omega, d, .. } => BoxDomain::cube(*d, -omega, *omega).ok(),
            FourierProfile::Gridded(g) => BoxDomain::new(g.lower.clone(), g.upper.clone()).ok(),
        }
    }

    /// Multiplies the profile by a real scalar.
    pub fn scaled(&self, c: f64) -> FourierProfile {
        let mut out = self.clone();
        match &mut out {
            FourierProfile::Gaussian { terms } => terms.iter_mut().for_each(|t| t.weight *= c),
            FourierProfile::RaisedCosine { amplitude, .. } | FourierProfile::CompactBump { amplitude, .. } => {
                *amplitude *= c
            }
            FourierProfile::Gridded(g) => g.values.iter_mut().for_each(|v| *v *= c),
            FourierProfile::Dictionary { atoms, .. } => atoms.iter_mut().for_each(|a| a.coef *= c),
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FourierProfile::Gaussian { terms } => terms.iter().all(|t| t.weight == 0.0),
            FourierProfile::RaisedCosine { amplitude, .. } | FourierProfile::CompactBump { amplitude, .. } => {
                *amplitude == 0.0
            }
            FourierProfile::Gridded(g) => g.values.iter().all(|v| *v == Complex64::new(0.0, 0.0)),
            FourierProfile::Dictionary { atoms, .. } => atoms.iter().all(|a| a.coef == 0.0),
        }
    }

    /// `f^(xi)`.
    pub fn value(&self, xi: &[f64]) -> Complex64 {
        match self {
            FourierProfile::Gaussian { terms } => terms
                .iter()
                .map(|t| {
                    let d = t.center.len() as f64;
                    let r2: f64 = xi.iter().map(|v| v * v).sum();
                    let phase: f64 = -xi.iter().zip(&t.center).map(|(a, b)| a * b).sum::<f64>();
                    let m = t.weight * (2.0 * t.a).powf(-0.5 * d) * (-r2 / (4.0 * t.a)).exp();
                    Complex64::from_polar(m, phase)
                })
                .sum(),
            FourierProfile::RaisedCosine { omega, amplitude, .. } => {
                if xi.iter().any(|v| v.abs() > *omega) {
                    return Complex64::new(0.0, 0.0);
                }
                let v: f64 = xi.iter().map(|v| 0.5 * (1.0 + (PI * v / omega).cos())).product();
                Complex64::new(amplitude * v, 0.0)
            }
            FourierProfile::CompactBump { omega, amplitude, .. } => {
                Complex64::new(amplitude * xi.iter().map(|v| bump_1d(*v, *omega)).product::<f64>(), 0.0)
            }
            FourierProfile::Gridded(g) => g.interpolate(xi),
            FourierProfile::Dictionary { omega, sigma, atoms, .. } => {
                if xi.iter().any(|v| v.abs() > *omega) {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::new(dictionary_value(sigma, atoms, xi), 0.0)
            }
        }
    }

    /// Radial envelope `|f^|` as a function of `|xi|` for Gaussian mixtures
    /// with a common centre, as `ln |f^(r)|`. `None` when `|f^|` is not radial.
    pub fn ln_radial_modulus(&self, r: f64) -> Option<f64> {
        match self {
            FourierProfile::Gaussian { terms } => {
                let c0 = &terms.first()?.center;
                if terms.iter().any(|t| &t.center != c0) {
                    return None;
                }
                let d = c0.len() as f64;
                let s: f64 = terms
                    .iter()
                    .map(|t| t.weight * (2.0 * t.a).powf(-0.5 * d) * (-r * r / (4.0 * t.a)).exp())
                    .sum();
                Some(s.abs().ln())
            }
            _ => None,
        }
    }

    /// `(2 pi)^{-d/2} int_{supp} (i xi)^alpha f^(xi) exp(i x . xi) dxi` for
    /// compactly supported profiles, by Gauss-Legendre quadrature.
    fn inverse_transform(&self, alpha: &MultiIndex, x: &[f64]) -> Complex64 {
        let support = self.support().expect("compact profile");
        let d = support.dim();
        let nodes = |j: usize| -> usize {
            let phase_range = support.side(j) * x[j].abs();
            ((0.65 * phase_range).ceil() as usize + 48 + alpha.0[j] as usize).min(8192)
        };
        let norm = (2.0 * PI).powf(-0.5 * d as f64);
        match self {
            FourierProfile::RaisedCosine { amplitude, .. } | FourierProfile::CompactBump { amplitude, .. } => {
                // separable: product of one-dimensional transforms
                let mut acc = Complex64::new(*amplitude * norm, 0.0);
                for j in 0..d {
                    let (xs, ws) = GaussLegendre::get(nodes(j)).on_interval(support.lower()[j], support.upper()[j]);
                    let a1 = MultiIndex(vec![alpha.0[j]]);
                    let s: Complex64 = xs
                        .iter()
                        .zip(&ws)
                        .map(|(&t, &w)| {
                            let p = match self {
                                FourierProfile::RaisedCosine { omega, .. } => 0.5 * (1.0 + (PI * t / omega).cos()),
                                FourierProfile::CompactBump { omega, .. } => bump_1d(t, *omega),
                                _ => unreachable!(),
                            };
                            derivative_factor(&a1, &[t]) * Complex64::from_polar(w * p, t * x[j])
                        })
                        .sum();
                    acc *= s;
                }
                acc
            }
            _ => {
                let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..d)
                    .map(|j| GaussLegendre::get(nodes(j)).on_interval(support.lower()[j], support.upper()[j]))
                    .collect();
                let res: Vec<usize> = axes.iter().map(|a| a.0.len()).collect();
                let total: usize = res.iter().product();
                let mut acc = Complex64::new(0.0, 0.0);
                let mut xi = vec![0.0; d];
                for flat in 0..total {
                    let k = unflatten(flat, &res);
                    let mut w = 1.0;
                    let mut phase = 0.0;
                    for j in 0..d {
                        xi[j] = axes[j].0[k[j]];
                        w *= axes[j].1[k[j]];
                        phase += xi[j] * x[j];
                    }
                    acc += derivative_factor(alpha, &xi) * self.value(&xi) * Complex64::from_polar(w, phase);
                }
                acc * norm
            }
        }
    }
}

fn bump_1d(t: f64, omega: f64) -> f64 {
    let u = t / omega;
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

pub(crate) fn dictionary_value(sigma: &SigmaHat, atoms: &[DictionaryAtom], xi: &[f64]) -> f64 {
    atoms
        .iter()
        .map(|a| a.coef * sigma.eval(a.w.iter().zip(xi).map(|(w, x)| w * x).sum::<f64>() + a.b))
        .sum()
}

impl GriddedProfile {
    pub fn step(&self, j: usize) -> f64 {
        (self.upper[j] - self.lower[j]) / (self.resolution[j] - 1) as f64
    }

    pub fn node(&self, k: &[usize]) -> Vec<f64> {
        (0..k.len()).map(|j| self.lower[j] + k[j] as f64 * self.step(j)).collect()
    }

    /// Samples `f` on the profile nodes.
    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(lower: Vec<f64>, upper: Vec<f64>, resolution: Vec<usize>, f: F) -> Self {
        let total: usize = resolution.iter().product();
        let mut g = GriddedProfile { lower, upper, resolution, values: Vec::with_capacity(total) };
        for flat in 0..total {
            let k = unflatten(flat, &g.resolution);
            let v = f(&g.node(&k));
            g.values.push(v);
        }
        g
    }

    pub fn interpolate(&self, xi: &[f64]) -> Complex64 {
        let d = self.lower.len();
        let mut base = vec![0usize; d];
        let mut frac = vec![0.0; d];
        for j in 0..d {
            if xi[j] < self.lower[j] || xi[j] > self.upper[j] {
                return Complex64::new(0.0, 0.0);
            }
            let t = (xi[j] - self.lower[j]) / self.step(j);
            let i = (t.floor() as usize).min(self.resolution[j] - 2);
            base[j] = i;
            frac[j] = t - i as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        let mut k = vec![0usize; d];
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            for j in 0..d {
                let up = corner >> j & 1 == 1;
                k[j] = base[j] + up as usize;
                w *= if up { frac[j] } else { 1.0 - frac[j] };
            }
            if w != 0.0 {
                acc += self.values[flatten(&k, &self.resolution)] * w;
            }
        }
        acc
    }

    /// Largest `|value|` on the boundary faces of the box.
    pub fn boundary_max(&self) -> f64 {
        let d = self.lower.len();
        self.values
            .iter()
            .enumerate()
            .filter(|(flat, _)| {
                let k = unflatten(*flat, &self.resolution);
                (0..d).any(|j| k[j] == 0 || k[j] == self.resolution[j] - 1)
            })
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }
}

impl Differentiable for FourierProfile {
    fn dim(&self) -> usize {
        FourierProfile::dim(self)
    }

    /// Spatial derivative `partial^alpha f(x)`, with `f` the inverse
    /// transform of the profile.
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Complex64 {
        match self {
            FourierProfile::Gaussian { terms } => terms
                .iter()
                .map(|t| {
                    let mut v = t.weight;
                    for j in 0..x.len() {
                        let sa = t.a.sqrt();
                        let u = sa * (x[j] - t.center[j]);
                        let n = alpha.0[j];
                        // d^n/dx^n exp(-a x^2) = (-sqrt(a))^n H_n(sqrt(a) x) exp(-a x^2)
                        v *= (-sa).powi(n as i32) * hermite(n, u) * (-u * u).exp();
                    }
                    Complex64::new(v, 0.0)
                })
                .sum(),
            _ => self.inverse_transform(alpha, x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate_adaptive;

    #[test]
    fn gaussian_pair_matches_direct_transform() {
        // f^(xi) = (2 pi)^{-1/2} int exp(-x^2) exp(-i x xi) dx
        let g = FourierProfile::gaussian(1.0, 1);
        for xi in [0.0, 0.7, 2.5] {
            let (re, _) = integrate_adaptive(|x| (-x * x).exp() * (x * xi).cos(), -12.0, 12.0, 1e-14, 0.0);
            let direct = re / (2.0 * PI).sqrt();
            assert!((g.value(&[xi]).re - direct).abs() < 1e-13);
        }
        assert!((g.value(&[0.0]).re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let g = FourierProfile::Gaussian { terms: vec![GaussianTerm { weight: 2.0, a: 3.0, center: vec![0.4] }] };
        let h = 1e-5;
        for x in [-0.3, 0.1, 0.5, 1.2] {
            for n in 0..4u32 {
                let up = g.derivative(&MultiIndex(vec![n]), &[x + h]).re;
                let dn = g.derivative(&MultiIndex(vec![n]), &[x - h]).re;
                let fd = (up - dn) / (2.0 * h);
                let exact = g.derivative(&MultiIndex(vec![n + 1]), &[x]).re;
                assert!((fd - exact).abs() < 1e-5 * (1.0 + exact.abs()), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn raised_cosine_spatial_closed_form() {
        // (2 pi)^{-1/2} int_{-W}^{W} (1 + cos(pi t / W))/2 e^{ixt} dt
        //   = (2 pi)^{-1/2} sin(W x) k^2 / (x (k^2 - x^2)),  k = pi / W
        let w = PI;
        let f = FourierProfile::raised_cosine(w, 1);
        let k = PI / w;
        for x in [0.3, 2.2, 7.9, 25.0] {
            let closed = (w * x).sin() * k * k / (x * (k * k - x * x)) / (2.0 * PI).sqrt();
            assert!((f.value_at(x) - closed).abs() < 1e-13, "x={x}");
        }
    }

    impl FourierProfile {
        fn value_at(&self, x: f64) -> f64 {
            self.derivative(&MultiIndex(vec![0]), &[x]).re
        }
    }

    #[test]
    fn gridded_interpolation_is_exact_on_affine_data() {
        let g = GriddedProfile::from_fn(vec![-1.0, -1.0], vec![1.0, 1.0], vec![5, 9], |x| {
            Complex64::new(1.0 + 2.0 * x[0] - x[1], 0.0)
        });
        for xi in [[0.13, -0.77], [0.99, 0.5], [-1.0, 1.0]] {
            assert!((g.interpolate(&xi).re - (1.0 + 2.0 * xi[0] - xi[1])).abs() < 1e-14);
        }
        assert_eq!(g.interpolate(&[1.5, 0.0]), Complex64::new(0.0, 0.0));
    }
}
