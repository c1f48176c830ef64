//! Sobolev and weighted symbol seminorms.
//!
//! Atom sums get their `H^l` norms from the exact Gram matrix of the atoms
//! on the box; grid samples go through spectral differentiation and periodic
//! quadrature. The two routes are kept independent so each can check the other.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{BoxDomain, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::grid::GridFunction;
use crate::numeric::{japanese_bracket, GaussLegendre};
use crate::spectral::{derivative_factor, Differentiable, SpectralFunction};

/// Highest Sobolev order accepted unless a larger one is configured.
pub const DEFAULT_MAX_ORDER: u32 = 12;

/// `phi(delta; a, b) = int_a^b exp(i delta x) dx`.
pub fn phi(delta: f64, a: f64, b: f64) -> Complex64 {
    let len = b - a;
    let mid = 0.5 * (a + b);
    let t = 0.5 * delta * len;
    // written as exp(i delta mid) * len * sinc(t) to keep the phase centred
    let sinc = if (delta * len).abs() < 1e-6 {
        let t2 = t * t;
        // six-term Taylor series of sin(t)/t
        1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0 + t2.powi(4) / 362_880.0
            - t2.powi(5) / 39_916_800.0
    } else {
        t.sin() / t
    };
    Complex64::from_polar(len * sinc, delta * mid)
}

/// Exact inner products `G[n][m] = int_U exp(i (theta_n - theta_m) . x) dx`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub entries: DMatrix<Complex64>,
    pub frequencies: Vec<Vec<f64>>,
    pub domain: BoxDomain,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// `||sum_n v_n e_n||^2 = sum_{n,m} v_n conj(v_m) G[n][m]`, clamped at zero.
    pub fn quadratic_form(&self, v: &[Complex64]) -> f64 {
        let n = v.len();
        let mut acc = 0.0;
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += self.entries[(i, j)] * v[j].conj();
            }
            acc += (v[i] * row).re;
        }
        acc.max(0.0)
    }

    /// Smallest eigenvalue of the Hermitian matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let eig = nalgebra::SymmetricEigen::new(self.entries.clone());
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn trace(&self) -> f64 {
        (0..self.len()).map(|i| self.entries[(i, i)].re).sum()
    }
}

pub fn gram(frequencies: &[Vec<f64>], domain: &BoxDomain) -> Result<GramMatrix> {
    let d = domain.dim();
    for f in frequencies {
        if f.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: f.len() });
        }
        if f.iter().any(|t| !t.is_finite()) {
            return invalid("frequencies must be finite");
        }
    }
    let n = frequencies.len();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return Complex64::new(domain.volume(), 0.0);
                    }
                    (0..d)
                        .map(|k| {
                            phi(frequencies[i][k] - frequencies[j][k], domain.lower()[k], domain.upper()[k])
                        })
                        .product()
                })
                .collect()
        })
        .collect();
    let mut entries = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    // enforce exact Hermitian symmetry
    for i in 0..n {
        for j in (i + 1)..n {
            entries[(j, i)] = entries[(i, j)].conj();
        }
    }
    Ok(GramMatrix { entries, frequencies: frequencies.to_vec(), domain: domain.clone() })
}

/// `||partial^alpha f||_{L^2(U)}^2` for every `alpha` grouped by order:
/// entry `k` is `sum_{|alpha| = k} ||partial^alpha f||^2`, for `k = 0..=ell`.
pub fn sobolev_order_terms(f: &SpectralFunction, ell: u32, max_order: u32) -> Result<Vec<f64>> {
    if ell > max_order {
        return invalid(format!("Sobolev order {ell} exceeds the configured maximum {max_order}"));
    }
    let f = f.canonicalize();
    if f.is_empty() {
        return Ok(vec![0.0; ell as usize + 1]);
    }
    let g = gram(&f.frequencies(), f.domain())?;
    let d = f.dim();
    let terms = (0..=ell)
        .map(|k| {
            MultiIndex::of_order(d, k)
                .par_iter()
                .map(|alpha| {
                    let v: Vec<Complex64> = f
                        .atoms()
                        .iter()
                        .map(|a| a.amplitude * derivative_factor(alpha, &a.frequency))
                        .collect();
                    g.quadratic_form(&v)
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum()
        })
        .collect();
    Ok(terms)
}

/// Exact `H^ell(U)` norm of an atom sum.
pub fn sobolev_norm(f: &SpectralFunction, ell: u32) -> Result<f64> {
    sobolev_norm_with_max(f, ell, DEFAULT_MAX_ORDER)
}

pub fn sobolev_norm_with_max(f: &SpectralFunction, ell: u32, max_order: u32) -> Result<f64> {
    Ok(sobolev_order_terms(f, ell, max_order)?.iter().sum::<f64>().sqrt())
}

/// `||partial^alpha f||_{L^2(U)}` from the Gram matrix.
pub fn derivative_l2_norm(f: &SpectralFunction, alpha: &MultiIndex) -> Result<f64> {
    let f = f.canonicalize();
    if f.is_empty() {
        return Ok(0.0);
    }
    let g = gram(&f.frequencies(), f.domain())?;
    let v: Vec<Complex64> = f
        .atoms()
        .iter()
        .map(|a| a.amplitude * derivative_factor(alpha, &a.frequency))
        .collect();
    Ok(g.quadratic_form(&v).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSobolev {
    pub value: f64,
    /// Set when more than `1e-10` of the spectral energy sits above a
    /// quarter of the grid's Nyquist band.
    pub aliasing_warning: bool,
}

/// Quadrature estimate of the `H^ell` norm: spectral differentiation
/// followed by periodic trapezoid quadrature.
pub fn sobolev_norm_grid(f: &GridFunction, ell: u32) -> Result<GridSobolev> {
    if ell > DEFAULT_MAX_ORDER {
        return invalid(format!("Sobolev order {ell} exceeds the configured maximum {DEFAULT_MAX_ORDER}"));
    }
    let sq: f64 = MultiIndex::up_to(f.dim(), ell)
        .iter()
        .map(|alpha| f.derivative(alpha).l2_norm().powi(2))
        .sum();
    Ok(GridSobolev { value: sq.sqrt(), aliasing_warning: f.high_frequency_fraction() > 1e-10 })
}

/// Weight `omega(x)` on the spatial domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    Constant { c: f64 },
    /// `exp(c |x|^beta)`.
    Exponential { c: f64, beta: f64 },
    /// `<x>^s`.
    BracketPower { s: f64 },
}

impl WeightSpec {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            WeightSpec::Constant { c } => c,
            WeightSpec::Exponential { c, beta } => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                (c * r.powf(beta)).exp()
            }
            WeightSpec::BracketPower { s } => japanese_bracket(x).powf(s),
        }
    }
}

/// Integrability exponent of [`symbol_seminorm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpExponent {
    One,
    Two,
    Infinity,
}

impl LpExponent {
    pub fn from_f64(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(LpExponent::One)
        } else if p == 2.0 {
            Ok(LpExponent::Two)
        } else if p == f64::INFINITY {
            Ok(LpExponent::Infinity)
        } else {
            invalid(format!("unsupported L^p exponent {p}; use 1, 2 or infinity"))
        }
    }
}

/// Breakpoints of one axis: the endpoints plus the origin when it is
/// interior (the exponential weight has a kink there).
fn axis_breaks(a: f64, b: f64) -> Vec<f64> {
    if a < 0.0 && b > 0.0 {
        vec![a, 0.0, b]
    } else {
        vec![a, b]
    }
}

fn composite_axis(a: f64, b: f64, per_segment: usize) -> (Vec<f64>, Vec<f64>) {
    let brk = axis_breaks(a, b);
    let rule = GaussLegendre::get(per_segment);
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for s in brk.windows(2) {
        let (x, w) = rule.on_interval(s[0], s[1]);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

fn tensor<T: Clone>(axes: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// `max_{|alpha| <= ell} ||omega partial^alpha f||_{L^p(U)}` for any
/// pointwise-differentiable function on `domain`.
///
/// `bandwidth` bounds the frequencies present in `f` and sizes the
/// quadrature (finite `p`) or the sup grid (`p = infinity`, endpoints and
/// the origin included).
pub fn symbol_seminorm_with<F: Differentiable + ?Sized>(
    f: &F,
    domain: &BoxDomain,
    bandwidth: f64,
    weight: &WeightSpec,
    p: f64,
    ell: u32,
) -> Result<f64> {
    let p = LpExponent::from_f64(p)?;
    if f.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: f.dim() });
    }
    let d = domain.dim();
    let alphas = MultiIndex::up_to(d, ell);
    let points: Vec<Vec<f64>>;
    let weights: Vec<f64>;
    match p {
        LpExponent::Infinity => {
            let axes: Vec<Vec<f64>> = (0..d)
                .map(|j| {
                    let (a, b) = (domain.lower()[j], domain.upper()[j]);
                    let m = ((8.0 * bandwidth * (b - a) / std::f64::consts::TAU).ceil() as usize + 64).min(4096);
                    let mut xs: Vec<f64> = (0..=m).map(|k| a + (b - a) * k as f64 / m as f64).collect();
                    xs[m] = b;
                    if a < 0.0 && b > 0.0 {
                        xs.push(0.0);
                    }
                    xs
                })
                .collect();
            points = tensor(&axes);
            weights = Vec::new();
        }
        _ => {
            let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..d)
                .map(|j| {
                    let (a, b) = (domain.lower()[j], domain.upper()[j]);
                    let n = ((bandwidth * (b - a) / 2.0).ceil() as usize + 32 + 2 * ell as usize).min(2048);
                    composite_axis(a, b, n)
                })
                .collect();
            points = tensor(&axes.iter().map(|a| a.0.clone()).collect::<Vec<_>>());
            weights = tensor(&axes.iter().map(|a| a.1.clone()).collect::<Vec<_>>())
                .into_iter()
                .map(|w| w.iter().product())
                .collect();
        }
    }
    let omega: Vec<f64> = points.iter().map(|x| weight.eval(x)).collect();
    let norms: Vec<f64> = alphas
        .par_iter()
        .map(|alpha| {
            let vals = points.iter().zip(&omega).map(|(x, w)| w * f.derivative(alpha, x).norm());
            match p {
                LpExponent::Infinity => vals.fold(0.0, f64::max),
                LpExponent::One => vals.zip(&weights).map(|(v, w)| v * w).sum(),
                LpExponent::Two => vals.zip(&weights).map(|(v, w)| v * v * w).sum::<f64>().sqrt(),
            }
        })
        .collect();
    Ok(norms.into_iter().fold(0.0, f64::max))
}

/// Symbol seminorm of an atom sum over its own domain.
pub fn symbol_seminorm(f: &SpectralFunction, weight: &WeightSpec, p: f64, ell: u32) -> Result<f64> {
    symbol_seminorm_with(f, f.domain(), f.max_abs_frequency(), weight, p, ell)
}

/// Symbol seminorm of grid samples: spectral derivatives, periodic
/// quadrature for finite `p`, sample maximum for `p = infinity`.
pub fn symbol_seminorm_grid(f: &GridFunction, weight: &WeightSpec, p: f64, ell: u32) -> Result<f64> {
    let p = LpExponent::from_f64(p)?;
    let res = f.resolution().to_vec();
    let omega: Vec<f64> = (0..f.len())
        .map(|flat| weight.eval(&f.node(&crate::grid::unflatten(flat, &res))))
        .collect();
    let cell = f.cell_volume();
    let mut best = 0.0f64;
    for alpha in MultiIndex::up_to(f.dim(), ell) {
        let da = f.derivative(&alpha);
        let vals = da.samples().iter().zip(&omega).map(|(v, w)| w * v.norm());
        let norm = match p {
            LpExponent::Infinity => vals.fold(0.0, f64::max),
            LpExponent::One => vals.sum::<f64>() * cell,
            LpExponent::Two => (vals.map(|v| v * v).sum::<f64>() * cell).sqrt(),
        };
        best = best.max(norm);
    }
    Ok(best)
}

/// An indexed family of seminorms `p_0, p_1, ...` on functions of type `F`.
pub trait SeminormSequence<F>: Send + Sync {
    fn seminorm(&self, f: &F, ell: u32) -> Result<f64>;

    /// `[p_0(f), ..., p_max_ell(f)]`; implementations that share work
    /// across orders override this.
    fn seminorms_upto(&self, f: &F, max_ell: u32) -> Result<Vec<f64>> {
        (0..=max_ell).map(|l| self.seminorm(f, l)).collect()
    }

    fn domain(&self) -> Option<&BoxDomain> {
        None
    }
}

/// `p_ell = ||.||_{H^ell(U)}`, with `p_0` the `L^2(U)` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SobolevLadder {
    pub domain: BoxDomain,
    pub max_order: u32,
}

impl SobolevLadder {
    pub fn new(domain: BoxDomain) -> Self {
        SobolevLadder { domain, max_order: DEFAULT_MAX_ORDER }
    }
}

impl SeminormSequence<SpectralFunction> for SobolevLadder {
    fn seminorm(&self, f: &SpectralFunction, ell: u32) -> Result<f64> {
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch);
        }
        sobolev_norm_with_max(f, ell, self.max_order)
    }

    fn seminorms_upto(&self, f: &SpectralFunction, max_ell: u32) -> Result<Vec<f64>> {
        if f.domain() != &self.domain {
            return Err(Error::DomainMismatch);
        }
        let terms = sobolev_order_terms(f, max_ell, self.max_order)?;
        let mut acc = 0.0;
        Ok(terms
            .iter()
            .map(|t| {
                acc += t;
                acc.sqrt()
            })
            .collect())
    }

    fn domain(&self) -> Option<&BoxDomain> {
        Some(&self.domain)
    }
}

type SeminormFn<F> = dyn Fn(&F, u32) -> Result<f64> + Send + Sync;

/// User-supplied seminorms.
#[derive(Clone)]
pub struct CustomSeminorms<F> {
    f: Arc<SeminormFn<F>>,
    domain: Option<BoxDomain>,
}

impl<F> CustomSeminorms<F> {
    pub fn new(f: impl Fn(&F, u32) -> Result<f64> + Send + Sync + 'static) -> Self {
        CustomSeminorms { f: Arc::new(f), domain: None }
    }

    /// One closure per index; indices past the end are an input error.
    pub fn from_list(list: Vec<Box<dyn Fn(&F) -> Result<f64> + Send + Sync>>) -> Self
    where
        F: 'static,
    {
        CustomSeminorms::new(move |f, ell| match list.get(ell as usize) {
            Some(p) => p(f),
            None => invalid(format!("no seminorm with index {ell}")),
        })
    }

    pub fn with_domain(mut self, domain: BoxDomain) -> Self {
        self.domain = Some(domain);
        self
    }
}

impl<F> SeminormSequence<F> for CustomSeminorms<F> {
    fn seminorm(&self, f: &F, ell: u32) -> Result<f64> {
        (self.f)(f, ell)
    }

    fn domain(&self) -> Option<&BoxDomain> {
        self.domain.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn two_pi() -> BoxDomain {
        BoxDomain::cube(1, 0.0, 2.0 * PI).unwrap()
    }

    fn f_n(n: f64) -> SpectralFunction {
        SpectralFunction::sine(two_pi(), n, 1.0 / PI.sqrt()).unwrap()
    }

    #[test]
    fn gram_examples() {
        let unit = BoxDomain::unit(1);
        let g = gram(&[vec![0.3]], &unit).unwrap();
        assert_eq!(g.entries[(0, 0)], Complex64::new(1.0, 0.0));

        let g = gram(&[vec![0.0], vec![2.0 * PI]], &unit).unwrap();
        assert!(g.entries[(0, 1)].norm() < 1e-15);

        let g = gram(&[vec![0.0], vec![PI]], &unit).unwrap();
        // G[0][1] = int_0^1 exp(-i pi x) dx = conj(2i/pi)
        let expected = Complex64::new(0.0, 2.0 / PI);
        assert!((g.entries[(1, 0)] - expected).norm() < 1e-15);
        let m = 1_000_000;
        let h = 1.0 / m as f64;
        let trap: Complex64 = (0..=m)
            .map(|k| {
                let w = if k == 0 || k == m { 0.5 } else { 1.0 };
                Complex64::from_polar(w * h, PI * k as f64 * h)
            })
            .sum();
        assert!((g.entries[(1, 0)] - trap).norm() < 1e-9);
    }

    #[test]
    fn phi_series_branch_is_continuous() {
        for delta in [1e-7, 5e-7, 9.9e-7, 1.01e-6, 2e-6] {
            let v = phi(delta, 0.0, 1.0);
            let direct = Complex64::new(delta.sin() / delta, 2.0 * (0.5 * delta).sin().powi(2) / delta);
            assert!((v - direct).norm() < 1e-12, "delta={delta}");
        }
    }

    #[test]
    fn sine_family_norms() {
        assert!((sobolev_norm(&f_n(3.0), 0).unwrap() - 1.0).abs() < 1e-13);
        let d2 = derivative_l2_norm(&f_n(3.0), &MultiIndex(vec![2])).unwrap();
        assert!((d2 - 9.0).abs() < 1e-12);
        assert!((sobolev_norm(&f_n(3.0), 2).unwrap() - 91f64.sqrt()).abs() < 1e-12);
        assert_eq!(sobolev_norm(&SpectralFunction::zero(two_pi()), 5).unwrap(), 0.0);
        assert!(sobolev_norm(&f_n(3.0), 13).is_err());
    }

    #[test]
    fn grid_oracle_examples() {
        let one = SpectralFunction::single(BoxDomain::unit(1), Complex64::new(1.0, 0.0), vec![0.0]).unwrap();
        let r = sobolev_norm_grid(&one.sample(&[16]).unwrap(), 0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14 && !r.aliasing_warning);

        let r = sobolev_norm_grid(&f_n(3.0).sample(&[256]).unwrap(), 1).unwrap();
        assert!((r.value - 10f64.sqrt()).abs() < 1e-6);

        let z = SpectralFunction::zero(two_pi()).sample(&[32]).unwrap();
        assert_eq!(sobolev_norm_grid(&z, 3).unwrap().value, 0.0);

        let r = sobolev_norm_grid(&f_n(30.0).sample(&[64]).unwrap(), 0).unwrap();
        assert!(r.aliasing_warning);
    }

    #[test]
    fn symbol_seminorm_examples() {
        let two = SpectralFunction::single(BoxDomain::unit(1), Complex64::new(2.0, 0.0), vec![0.0]).unwrap();
        let w1 = WeightSpec::Constant { c: 1.0 };
        assert!((symbol_seminorm(&two, &w1, f64::INFINITY, 0).unwrap() - 2.0).abs() < 1e-15);

        let v = symbol_seminorm(&f_n(3.0), &w1, 2.0, 1).unwrap();
        assert!((v - 3.0).abs() < 1e-12);

        let one = SpectralFunction::single(BoxDomain::unit(1), Complex64::new(1.0, 0.0), vec![0.0]).unwrap();
        let we = WeightSpec::Exponential { c: 1.0, beta: 1.0 };
        let v = symbol_seminorm(&one, &we, f64::INFINITY, 0).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-14);

        assert!(symbol_seminorm(&one, &we, 3.0, 0).is_err());
    }

    #[test]
    fn symbol_seminorm_l1_with_kinked_weight() {
        // int_{-1}^{1} e^{|x|} dx = 2 (e - 1)
        let dom = BoxDomain::cube(1, -1.0, 1.0).unwrap();
        let one = SpectralFunction::single(dom, Complex64::new(1.0, 0.0), vec![0.0]).unwrap();
        let we = WeightSpec::Exponential { c: 1.0, beta: 1.0 };
        let v = symbol_seminorm(&one, &we, 1.0, 0).unwrap();
        assert!((v - 2.0 * (std::f64::consts::E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn grid_symbol_seminorm_matches_spectral() {
        let w1 = WeightSpec::Constant { c: 1.0 };
        let g = f_n(3.0).sample(&[128]).unwrap();
        let v = symbol_seminorm_grid(&g, &w1, 2.0, 1).unwrap();
        assert!((v - 3.0).abs() < 1e-10);
    }

    #[test]
    fn ladder_is_cumulative() {
        let ladder = SobolevLadder::new(two_pi());
        let all = ladder.seminorms_upto(&f_n(2.0), 4).unwrap();
        for (l, v) in all.iter().enumerate() {
            assert!((v - ladder.seminorm(&f_n(2.0), l as u32).unwrap()).abs() < 1e-12);
        }
        assert!(all.windows(2).all(|w| w[0] <= w[1]));
    }
}
