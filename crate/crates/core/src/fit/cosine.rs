//! Orthogonal greedy fitting of `sum_n a_n e^{i theta_n . x}` in `H^l(U)`.
//!
//! Everything is discretised on one tensor Gauss-Legendre rule: a function
//! becomes the stacked vector of `sqrt(w_j) partial^alpha f(x_j)` over all
//! `|alpha| <= l`, so the `H^l` inner product is a plain dot product.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{BoxDomain, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::fit::{FitKind, FitReport};
use crate::grid::{unflatten, GridFunction};
use crate::numeric::GaussLegendre;
use crate::spectral::{derivative_factor, Atom, Differentiable, SpectralFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CosineConfig {
    /// Largest `|theta_j|` searched; `None` picks `64 * 2pi` in one
    /// dimension and `8 * 2pi` otherwise.
    pub theta_max: Option<f64>,
    /// Coefficient budget `M`; `None` means unbounded.
    pub budget: Option<f64>,
    /// Sobolev order of the fitting norm.
    pub order: u32,
    pub refine_tolerance: f64,
    /// Largest admissible condition number of the Gram matrix.
    pub max_gram_condition: f64,
    pub max_retries: usize,
    /// Greedy stops once the residual is below this fraction of the target norm.
    pub stop_tolerance: f64,
    /// Passes that re-refine each selected frequency against its partial
    /// residual after an atom is added; changes are kept only if the
    /// residual drops.
    pub backfit_sweeps: usize,
}

impl Default for CosineConfig {
    fn default() -> Self {
        CosineConfig {
            theta_max: None,
            budget: None,
            order: 0,
            refine_tolerance: 1e-8,
            max_gram_condition: 1e12,
            max_retries: 5,
            stop_tolerance: 1e-13,
            backfit_sweeps: 4,
        }
    }
}

impl CosineConfig {
    pub fn with_order(order: u32) -> Self {
        CosineConfig { order, ..Default::default() }
    }

    fn theta_max_for(&self, d: usize) -> f64 {
        self.theta_max.unwrap_or(if d == 1 { 64.0 * 2.0 * PI } else { 8.0 * 2.0 * PI })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineNetwork {
    pub function: SpectralFunction,
    pub budget: Option<f64>,
}

impl CosineNetwork {
    pub fn width(&self) -> usize {
        self.function.len()
    }

    pub fn within_budget(&self) -> bool {
        self.budget.is_none_or(|m| self.function.l1_amplitude() <= m + 1e-12)
    }
}

/// Tensor quadrature and derivative bookkeeping shared by all steps.
struct Space {
    d: usize,
    axes: Vec<Vec<f64>>,
    points: Vec<Vec<f64>>,
    sqrt_w: Vec<f64>,
    volume: f64,
    alphas: Vec<MultiIndex>,
    /// Coarse search grid per axis and its spacing.
    grid: Vec<Vec<f64>>,
    step: Vec<f64>,
}

impl Space {
    fn new(domain: &BoxDomain, order: u32, theta_max: f64) -> Result<Space> {
        let d = domain.dim();
        let mut axes = Vec::with_capacity(d);
        let mut ws = Vec::with_capacity(d);
        let mut grid = Vec::with_capacity(d);
        let mut step = Vec::with_capacity(d);
        for j in 0..d {
            let side = domain.side(j);
            let n = (theta_max * side).ceil() as usize + 64;
            if n > 20_000 {
                return Err(Error::Resource(format!("{n} quadrature nodes per axis")));
            }
            let (x, w) = GaussLegendre::get(n).on_interval(domain.lower()[j], domain.upper()[j]);
            axes.push(x);
            ws.push(w);
            let h = PI / side;
            let k = (theta_max / h).floor() as i64;
            grid.push((-k..=k).map(|i| i as f64 * h).collect());
            step.push(h);
        }
        let res: Vec<usize> = axes.iter().map(|a| a.len()).collect();
        let total: usize = res.iter().product();
        if total > 4_000_000 {
            return Err(Error::Resource(format!("{total} quadrature nodes")));
        }
        let mut points = Vec::with_capacity(total);
        let mut sqrt_w = Vec::with_capacity(total);
        for flat in 0..total {
            let k = unflatten(flat, &res);
            points.push((0..d).map(|j| axes[j][k[j]]).collect::<Vec<f64>>());
            sqrt_w.push((0..d).map(|j| ws[j][k[j]]).product::<f64>().sqrt());
        }
        let volume = sqrt_w.iter().map(|s| s * s).sum();
        Ok(Space { d, axes, points, sqrt_w, volume, alphas: MultiIndex::up_to(d, order), grid, step })
    }

    fn nodes(&self) -> usize {
        self.points.len()
    }

    fn stack(&self, f: &(impl Differentiable + ?Sized)) -> Vec<Complex64> {
        let n = self.nodes();
        let mut out = vec![Complex64::new(0.0, 0.0); n * self.alphas.len()];
        out.par_chunks_mut(n).zip(self.alphas.par_iter()).for_each(|(chunk, alpha)| {
            for (j, v) in chunk.iter_mut().enumerate() {
                *v = f.derivative(alpha, &self.points[j]) * self.sqrt_w[j];
            }
        });
        out
    }

    fn column(&self, theta: &[f64]) -> Vec<Complex64> {
        let n = self.nodes();
        let phases = self.phases(theta, 1.0);
        let mut out = Vec::with_capacity(n * self.alphas.len());
        for alpha in &self.alphas {
            let fac = derivative_factor(alpha, theta);
            for j in 0..n {
                out.push(fac * phases[j] * self.sqrt_w[j]);
            }
        }
        out
    }

    /// `e^{sign i theta . x_j}` for every node, built per axis.
    fn phases(&self, theta: &[f64], sign: f64) -> Vec<Complex64> {
        let per_axis: Vec<Vec<Complex64>> = (0..self.d)
            .map(|k| self.axes[k].iter().map(|&x| Complex64::from_polar(1.0, sign * theta[k] * x)).collect())
            .collect();
        tensor_product(&per_axis)
    }

    /// Squared `H^l` norm of the unit-amplitude atom.
    fn atom_norm_sq(&self, theta: &[f64]) -> f64 {
        self.volume * self.alphas.iter().map(|a| a.monomial(theta).powi(2)).sum::<f64>()
    }
}

/// Row-major (last axis fastest) tensor product of per-axis factors.
fn tensor_product(per_axis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for axis in per_axis {
        out = out.iter().flat_map(|p| axis.iter().map(move |q| p * q)).collect();
    }
    out
}

/// `|<r, a_theta>|^2 / |a_theta|^2` and its gradient.
struct Score<'a> {
    space: &'a Space,
    /// `sqrt(w_j) r_alpha(x_j)` for each alpha, already weighted once more
    /// by `sqrt(w_j)`: `u_alpha[j] = w_j partial^alpha r(x_j)`.
    u: Vec<Vec<Complex64>>,
}

impl<'a> Score<'a> {
    fn new(space: &'a Space, residual: &[Complex64]) -> Score<'a> {
        let n = space.nodes();
        let u = (0..space.alphas.len())
            .map(|a| (0..n).map(|j| residual[a * n + j] * space.sqrt_w[j]).collect())
            .collect();
        Score { space, u }
    }

    fn conj_factors(&self, theta: &[f64]) -> Vec<Complex64> {
        self.space.alphas.iter().map(|a| derivative_factor(a, theta).conj()).collect()
    }

    fn value(&self, theta: &[f64]) -> f64 {
        let e = self.space.phases(theta, -1.0);
        let g = self.conj_factors(theta);
        let s: Complex64 = self
            .u
            .iter()
            .zip(&g)
            .map(|(u, g)| g * u.iter().zip(&e).map(|(a, b)| a * b).sum::<Complex64>())
            .sum();
        let n = self.space.atom_norm_sq(theta);
        if n == 0.0 {
            0.0
        } else {
            s.norm_sqr() / n
        }
    }

    /// `dF / d theta_k`.
    fn derivative(&self, theta: &[f64], k: usize) -> f64 {
        let sp = self.space;
        let e = sp.phases(theta, -1.0);
        let mut s = Complex64::new(0.0, 0.0);
        let mut ds = Complex64::new(0.0, 0.0);
        let mut n = 0.0;
        let mut dn = 0.0;
        for (a, alpha) in sp.alphas.iter().enumerate() {
            let g = derivative_factor(alpha, theta).conj();
            let ak = alpha.0[k];
            let mut dg = Complex64::new(0.0, 0.0);
            let mut dmono_sq = 0.0;
            if ak > 0 {
                let mut lower = alpha.clone();
                lower.0[k] -= 1;
                // d/dtheta_k of (-i)^|alpha| theta^alpha
                dg = Complex64::new(0.0, -1.0).powu(alpha.order()) * (ak as f64) * lower.monomial(theta);
                dmono_sq = 2.0 * alpha.monomial(theta) * (ak as f64) * lower.monomial(theta);
            }
            let mut uh = Complex64::new(0.0, 0.0);
            let mut duh = Complex64::new(0.0, 0.0);
            for (j, (u, ph)) in self.u[a].iter().zip(&e).enumerate() {
                let t = u * ph;
                uh += t;
                duh += t * Complex64::new(0.0, -sp.points[j][k]);
            }
            s += g * uh;
            ds += dg * uh + g * duh;
            n += alpha.monomial(theta).powi(2);
            dn += dmono_sq;
        }
        n *= sp.volume;
        dn *= sp.volume;
        if n == 0.0 {
            return 0.0;
        }
        (2.0 * (s.conj() * ds).re * n - s.norm_sqr() * dn) / (n * n)
    }

    /// Best point of the coarse grid, lowest row-major index on ties.
    fn coarse_argmax(&self) -> Vec<f64> {
        let sp = self.space;
        let d = sp.d;
        let gres: Vec<usize> = sp.grid.iter().map(|g| g.len()).collect();
        let total: usize = gres.iter().product();
        let tables: Vec<Vec<Vec<Complex64>>> = (0..d)
            .map(|k| {
                sp.grid[k]
                    .iter()
                    .map(|&t| sp.axes[k].iter().map(|&x| Complex64::from_polar(1.0, -t * x)).collect())
                    .collect()
            })
            .collect();
        let scores: Vec<f64> = (0..total)
            .into_par_iter()
            .map(|flat| {
                let gi = unflatten(flat, &gres);
                let theta: Vec<f64> = (0..d).map(|k| sp.grid[k][gi[k]]).collect();
                let norm = sp.atom_norm_sq(&theta);
                if norm == 0.0 {
                    return 0.0;
                }
                let g = self.conj_factors(&theta);
                let rows: Vec<Vec<Complex64>> = (0..d).map(|k| tables[k][gi[k]].clone()).collect();
                let ph = tensor_product(&rows);
                let mut s = Complex64::new(0.0, 0.0);
                for (a, u) in self.u.iter().enumerate() {
                    let acc: Complex64 = u.iter().zip(&ph).map(|(x, y)| x * y).sum();
                    s += g[a] * acc;
                }
                s.norm_sqr() / norm
            })
            .collect();
        let mut best = 0;
        for (i, &v) in scores.iter().enumerate() {
            if v > scores[best] {
                best = i;
            }
        }
        let gi = unflatten(best, &gres);
        (0..d).map(|k| sp.grid[k][gi[k]]).collect()
    }

    /// Golden-section sweeps per coordinate within one grid step, then
    /// bisection on the sign of the partial derivative.
    fn refine(&self, mut theta: Vec<f64>, tol: f64) -> Vec<f64> {
        let d = theta.len();
        let sweeps = if d == 1 { 1 } else { 3 };
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..sweeps {
            for k in 0..d {
                let h = self.space.step[k];
                let (mut a, mut b) = (theta[k] - h, theta[k] + h);
                let at = |t: f64, th: &mut Vec<f64>| {
                    th[k] = t;
                    self.value(th)
                };
                let mut probe = theta.clone();
                let mut c = b - inv_phi * (b - a);
                let mut e = a + inv_phi * (b - a);
                let mut fc = at(c, &mut probe);
                let mut fe = at(e, &mut probe);
                while b - a > tol {
                    if fc >= fe {
                        b = e;
                        e = c;
                        fe = fc;
                        c = b - inv_phi * (b - a);
                        fc = at(c, &mut probe);
                    } else {
                        a = c;
                        c = e;
                        fc = fe;
                        e = a + inv_phi * (b - a);
                        fe = at(e, &mut probe);
                    }
                }
                let cand = 0.5 * (a + b);
                let old = theta[k];
                let f_old = self.value(&theta);
                theta[k] = cand;
                if self.value(&theta) < f_old {
                    theta[k] = old;
                }
            }
        }
        for k in 0..d {
            let delta = 1e-6 * theta[k].abs().max(1.0);
            let mut lo = theta.clone();
            let mut hi = theta.clone();
            lo[k] -= delta;
            hi[k] += delta;
            if self.derivative(&lo, k) > 0.0 && self.derivative(&hi, k) < 0.0 {
                let f_before = self.value(&theta);
                let mut mid = theta.clone();
                for _ in 0..80 {
                    mid[k] = 0.5 * (lo[k] + hi[k]);
                    if hi[k] - lo[k] <= 4.0 * f64::EPSILON * theta[k].abs().max(1.0) {
                        break;
                    }
                    if self.derivative(&mid, k) > 0.0 {
                        lo[k] = mid[k];
                    } else {
                        hi[k] = mid[k];
                    }
                }
                if self.value(&mid) >= f_before {
                    theta[k] = mid[k];
                }
            }
        }
        theta
    }
}

/// `sum conj(u) v`.
fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Greedy state that can be advanced one atom at a time, so a ladder of
/// widths reuses the atoms of the smaller fits.
pub struct CosineFitter {
    space: Space,
    domain: BoxDomain,
    config: CosineConfig,
    target: Vec<Complex64>,
    target_norm: f64,
    thetas: Vec<Vec<f64>>,
    columns: Vec<Vec<Complex64>>,
    gram: DMatrix<Complex64>,
    amplitudes: Vec<Complex64>,
    residual: Vec<Complex64>,
    residuals: Vec<f64>,
    retries: usize,
    stopped: bool,
    started: Instant,
}

impl CosineFitter {
    pub fn new(target: &(impl Differentiable + ?Sized), domain: &BoxDomain, config: CosineConfig) -> Result<Self> {
        if target.dim() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), got: target.dim() });
        }
        if config.order > crate::seminorms::DEFAULT_MAX_ORDER {
            return invalid(format!("order {} exceeds the maximum {}", config.order, crate::seminorms::DEFAULT_MAX_ORDER));
        }
        if let Some(m) = config.budget {
            if !(m > 0.0) {
                return invalid(format!("coefficient budget must be positive, got {m}"));
            }
        }
        let theta_max = config.theta_max_for(domain.dim());
        if !(theta_max > 0.0 && theta_max.is_finite()) {
            return invalid(format!("theta_max must be positive, got {theta_max}"));
        }
        let started = Instant::now();
        let space = Space::new(domain, config.order, theta_max)?;
        let target = space.stack(target);
        let target_norm = norm(&target);
        Ok(CosineFitter {
            residual: target.clone(),
            space,
            domain: domain.clone(),
            config,
            target,
            target_norm,
            thetas: Vec::new(),
            columns: Vec::new(),
            gram: DMatrix::zeros(0, 0),
            amplitudes: Vec::new(),
            residuals: Vec::new(),
            retries: 0,
            stopped: false,
            started,
        })
    }

    pub fn atoms(&self) -> usize {
        self.thetas.len()
    }

    pub fn residual_norm(&self) -> f64 {
        norm(&self.residual)
    }

    pub fn stopped(&self) -> bool {
        self.stopped
    }

    /// Least squares over `columns` through their Gram matrix, with one
    /// round of iterative refinement against the explicit residual. `None`
    /// when the Gram matrix is too ill-conditioned.
    fn solve(&self, columns: &[Vec<Complex64>], gram: &DMatrix<Complex64>) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
        let eig = gram.clone().symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        if !(lo > 0.0) || hi / lo > self.config.max_gram_condition {
            return None;
        }
        let chol = gram.clone().cholesky()?;
        let project = |v: &[Complex64]| DVector::from_iterator(columns.len(), columns.iter().map(|c| inner(c, v)));
        let residual_of = |a: &DVector<Complex64>| {
            let mut r = self.target.clone();
            for (c, x) in columns.iter().zip(a.iter()) {
                r.iter_mut().zip(c).for_each(|(ri, ci)| *ri -= x * ci);
            }
            r
        };
        let mut a = chol.solve(&project(&self.target));
        let r = residual_of(&a);
        a += chol.solve(&project(&r));
        let r = residual_of(&a);
        Some((a.iter().copied().collect(), r))
    }

    /// Gram matrix of `columns`, reusing `self.gram` for all but `changed`.
    fn gram_with(&self, columns: &[Vec<Complex64>], changed: usize) -> DMatrix<Complex64> {
        let k = columns.len();
        let mut g = DMatrix::zeros(k, k);
        let old = self.gram.nrows();
        for m in 0..k.min(old) {
            for n in 0..k.min(old) {
                g[(m, n)] = self.gram[(m, n)];
            }
        }
        for m in 0..k {
            let v = inner(&columns[m], &columns[changed]);
            g[(m, changed)] = v;
            g[(changed, m)] = v.conj();
        }
        g[(changed, changed)] = Complex64::new(g[(changed, changed)].re, 0.0);
        g
    }

    /// Moves each frequency to the best local point for the residual
    /// without that atom, one atom at a time.
    fn backfit(&mut self) {
        let tol = self.config.refine_tolerance;
        for _ in 0..self.config.backfit_sweeps {
            let start = self.residual_norm();
            for i in 0..self.thetas.len() {
                let mut partial = self.residual.clone();
                for (p, c) in partial.iter_mut().zip(&self.columns[i]) {
                    *p += self.amplitudes[i] * c;
                }
                let score = Score::new(&self.space, &partial);
                let theta = score.refine(self.thetas[i].clone(), tol);
                if theta == self.thetas[i] {
                    continue;
                }
                let mut cols = self.columns.clone();
                cols[i] = self.space.column(&theta);
                let gram = self.gram_with(&cols, i);
                if let Some((a, residual)) = self.solve(&cols, &gram) {
                    if norm(&residual) < self.residual_norm() {
                        self.thetas[i] = theta;
                        self.columns = cols;
                        self.gram = gram;
                        self.amplitudes = a;
                        self.residual = residual;
                    }
                }
            }
            if self.residual_norm() >= start * (1.0 - 1e-12) {
                break;
            }
        }
    }

    /// Adds one atom. Returns `false` when the fit has already converged.
    pub fn step(&mut self) -> Result<bool> {
        if self.stopped {
            return Ok(false);
        }
        let res_norm = self.residual_norm();
        if res_norm <= self.config.stop_tolerance * self.target_norm || self.target_norm == 0.0 {
            self.stopped = true;
            return Ok(false);
        }
        let score = Score::new(&self.space, &self.residual);
        let coarse = score.coarse_argmax();
        let mut theta = score.refine(coarse, self.config.refine_tolerance);
        for attempt in 0..=self.config.max_retries {
            let col = self.space.column(&theta);
            let mut cols = self.columns.clone();
            cols.push(col);
            let gram = self.gram_with(&cols, cols.len() - 1);
            if let Some((a, residual)) = self.solve(&cols, &gram) {
                self.thetas.push(theta);
                self.columns = cols;
                self.gram = gram;
                self.amplitudes = a;
                self.residual = residual;
                self.backfit();
                self.residuals.push(self.residual_norm());
                return Ok(true);
            }
            if attempt < self.config.max_retries {
                self.retries += 1;
                for (t, h) in theta.iter_mut().zip(&self.space.step) {
                    *t += 0.5 * h;
                }
            }
        }
        Err(Error::IllConditioned(format!(
            "Gram matrix condition above {:e} after {} retries at width {}",
            self.config.max_gram_condition,
            self.config.max_retries,
            self.thetas.len() + 1
        )))
    }

    /// Steps until `width` atoms are in use or the residual vanishes.
    pub fn advance_to(&mut self, width: usize) -> Result<()> {
        while self.thetas.len() < width {
            if !self.step()? {
                break;
            }
        }
        Ok(())
    }

    /// The current network, rescaled into the coefficient budget if needed.
    pub fn snapshot(&self, width: usize) -> Result<(CosineNetwork, FitReport)> {
        let mut amps = self.amplitudes.clone();
        let l1: f64 = amps.iter().map(|a| a.norm()).sum();
        let mut rescale = None;
        let mut error = self.residual_norm();
        if let Some(m) = self.config.budget {
            if l1 > m {
                let s = m / l1;
                amps.iter_mut().for_each(|a| *a *= s);
                rescale = Some(s);
                let mut r = self.target.clone();
                for (col, a) in self.columns.iter().zip(&amps) {
                    for (ri, ci) in r.iter_mut().zip(col) {
                        *ri -= a * ci;
                    }
                }
                error = norm(&r);
            }
        }
        let atoms: Vec<Atom> = self.thetas.iter().zip(&amps).map(|(t, a)| Atom::new(*a, t.clone())).collect();
        let function = SpectralFunction::new(self.domain.clone(), atoms)?;
        let report = FitReport {
            kind: FitKind::Cosine,
            width,
            atoms: self.thetas.len(),
            residuals: self.residuals.clone(),
            parameters: self.thetas.clone(),
            target_norm: self.target_norm,
            error,
            order: self.config.order,
            budget_rescale: rescale,
            early_stop: self.stopped && self.thetas.len() < width,
            retries: self.retries,
            seconds: self.started.elapsed().as_secs_f64(),
        };
        Ok((CosineNetwork { function, budget: self.config.budget }, report))
    }
}

/// Fits `width` atoms to `target` on `domain`.
pub fn fit_cosine(
    target: &(impl Differentiable + ?Sized),
    domain: &BoxDomain,
    width: usize,
    config: &CosineConfig,
) -> Result<(CosineNetwork, FitReport)> {
    if width < 1 {
        return invalid("width must be at least 1");
    }
    let mut fitter = CosineFitter::new(target, domain, config.clone())?;
    fitter.advance_to(width)?;
    fitter.snapshot(width)
}

/// Fits the trigonometric interpolant of a grid function.
pub fn fit_cosine_grid(target: &GridFunction, width: usize, config: &CosineConfig) -> Result<(CosineNetwork, FitReport)> {
    fit_cosine(&target.to_spectral(), target.domain(), width, config)
}

/// Nested fits for strictly increasing widths, each warm-started from the
/// previous one.
pub fn cosine_ladder(
    target: &(impl Differentiable + ?Sized),
    domain: &BoxDomain,
    widths: &[usize],
    config: &CosineConfig,
) -> Result<Vec<(CosineNetwork, FitReport)>> {
    check_widths(widths)?;
    let mut fitter = CosineFitter::new(target, domain, config.clone())?;
    let mut out = Vec::with_capacity(widths.len());
    for &w in widths {
        fitter.advance_to(w)?;
        out.push(fitter.snapshot(w)?);
    }
    Ok(out)
}

pub(crate) fn check_widths(widths: &[usize]) -> Result<()> {
    if widths.is_empty() {
        return invalid("width list is empty");
    }
    if widths[0] < 1 || widths.windows(2).any(|w| w[1] <= w[0]) {
        return invalid("widths must be positive and strictly increasing");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seminorms::sobolev_norm;

    #[test]
    fn recovers_one_atom() {
        let dom = BoxDomain::unit(1);
        let f = SpectralFunction::single(dom.clone(), Complex64::new(0.7, -0.2), vec![13.3]).unwrap();
        let (net, rep) = fit_cosine(&f, &dom, 1, &CosineConfig::default()).unwrap();
        let err = sobolev_norm(&f.sub(&net.function).unwrap(), 0).unwrap();
        assert!(err <= 1e-8 * sobolev_norm(&f, 0).unwrap(), "{err}");
        assert!(rep.error <= 1e-8 * rep.target_norm);
    }

    #[test]
    fn recovers_three_separated_atoms_in_h1() {
        let dom = BoxDomain::unit(1);
        let atoms = vec![
            Atom::new(Complex64::new(1.0, 0.0), vec![-40.0]),
            Atom::new(Complex64::new(0.5, 0.5), vec![7.5]),
            Atom::new(Complex64::new(-0.3, 0.0), vec![90.25]),
        ];
        let f = SpectralFunction::new(dom.clone(), atoms).unwrap();
        let (net, _) = fit_cosine(&f, &dom, 3, &CosineConfig::with_order(1)).unwrap();
        let err = sobolev_norm(&f.sub(&net.function).unwrap(), 1).unwrap();
        assert!(err <= 1e-6 * sobolev_norm(&f, 1).unwrap(), "{err}");
    }

    #[test]
    fn budget_is_enforced() {
        let dom = BoxDomain::unit(1);
        let f = SpectralFunction::cosine(dom.clone(), 5.0, 3.0).unwrap();
        let cfg = CosineConfig { budget: Some(1.0), ..Default::default() };
        let (net, rep) = fit_cosine(&f, &dom, 2, &cfg).unwrap();
        assert!(net.within_budget());
        assert!(rep.budget_rescale.is_some());
    }

    #[test]
    fn ladder_guards() {
        let dom = BoxDomain::unit(1);
        let f = SpectralFunction::cosine(dom.clone(), 5.0, 1.0).unwrap();
        let cfg = CosineConfig::default();
        assert!(cosine_ladder(&f, &dom, &[], &cfg).is_err());
        assert!(cosine_ladder(&f, &dom, &[2, 2], &cfg).is_err());
        let one = cosine_ladder(&f, &dom, &[1], &cfg).unwrap();
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn zero_target_stops_immediately() {
        let dom = BoxDomain::unit(1);
        let f = SpectralFunction::zero(dom.clone());
        let (net, rep) = fit_cosine(&f, &dom, 4, &CosineConfig::default()).unwrap();
        assert_eq!(net.width(), 0);
        assert!(rep.early_stop);
    }

    #[test]
    fn two_dimensional_atom() {
        let dom = BoxDomain::unit(2);
        let f = SpectralFunction::single(dom.clone(), Complex64::new(1.0, 0.0), vec![6.1, -3.7]).unwrap();
        let (net, _) = fit_cosine(&f, &dom, 1, &CosineConfig::default()).unwrap();
        let err = sobolev_norm(&f.sub(&net.function).unwrap(), 0).unwrap();
        assert!(err <= 1e-7, "{err}");
    }
}
