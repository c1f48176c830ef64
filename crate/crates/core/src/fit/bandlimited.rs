//! Greedy fits of bandlimited targets by ridge atoms
//! `sigma^(<w, xi> + b) 1[xi in [-Omega, Omega]^d]`, carried out on the
//! frequency side where the spatial `L^2` error is the same number.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barron::{DictionaryAtom, FourierProfile, SigmaHat};
use crate::domain::BoxDomain;
use crate::error::{invalid, Error, Result};
use crate::fit::cosine::check_widths;
use crate::fit::{FitKind, FitReport};
use crate::frechet::MetricOperand;
use crate::grid::unflatten;
use crate::numeric::{japanese_bracket, pairwise_sum, GaussLegendre};
use crate::seminorms::SeminormSequence;

/// A function whose transform is the given profile, supported in `[-Omega, Omega]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandlimitedTarget {
    pub profile: FourierProfile,
    pub omega: f64,
}

impl BandlimitedTarget {
    pub fn new(profile: FourierProfile, omega: f64) -> Result<Self> {
        profile.validate()?;
        if !(omega > 0.0 && omega.is_finite()) {
            return invalid(format!("Omega must be positive, got {omega}"));
        }
        let support = profile
            .support()
            .ok_or_else(|| Error::Precondition("bandlimited targets need a compactly supported transform".into()))?;
        let inside = (0..support.dim())
            .all(|j| support.lower()[j] >= -omega * (1.0 + 1e-12) && support.upper()[j] <= omega * (1.0 + 1e-12));
        if !inside {
            return Err(Error::Precondition(format!("profile support exceeds [-{omega}, {omega}]^d")));
        }
        Ok(BandlimitedTarget { profile, omega })
    }

    pub fn raised_cosine(omega: f64, d: usize) -> Result<Self> {
        BandlimitedTarget::new(FourierProfile::raised_cosine(omega, d), omega)
    }

    pub fn dim(&self) -> usize {
        self.profile.dim()
    }

    pub fn frequency_box(&self) -> BoxDomain {
        BoxDomain::cube(self.dim(), -self.omega, self.omega).expect("positive Omega")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BandlimitedConfig {
    pub sigma: SigmaHat,
    /// Candidate `w` lie on a grid over `[-w_max, w_max]^d` clipped to the ball `|w| <= w_max`.
    pub w_max: f64,
    pub w_points: usize,
    /// Candidate offsets `b` on `[-b_max, b_max]`; `None` uses `w_max Omega sqrt(d)`.
    pub b_max: Option<f64>,
    pub b_points: usize,
    /// Gauss-Legendre nodes per axis of the frequency box.
    pub nodes_per_axis: usize,
    /// Stop once an added atom lowers the residual by less than this
    /// fraction of the target norm.
    pub stop_tolerance: f64,
}

impl Default for BandlimitedConfig {
    fn default() -> Self {
        BandlimitedConfig::for_dim(1)
    }
}

impl BandlimitedConfig {
    pub fn for_dim(d: usize) -> Self {
        match d {
            1 => BandlimitedConfig {
                sigma: SigmaHat::default(),
                w_max: 8.0,
                w_points: 33,
                b_max: None,
                b_points: 129,
                nodes_per_axis: 256,
                stop_tolerance: 1e-14,
            },
            _ => BandlimitedConfig {
                sigma: SigmaHat::default(),
                w_max: 4.0,
                w_points: 13,
                b_max: None,
                b_points: 41,
                nodes_per_axis: 48,
                stop_tolerance: 1e-14,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.w_max > 0.0 && self.w_points >= 1 && self.b_points >= 1 && self.nodes_per_axis >= 2) {
            return invalid("candidate grid and quadrature sizes must be positive");
        }
        if !(self.sigma.s > 0.0) {
            return invalid("sigma^ decay exponent must be positive");
        }
        if let Some(b) = self.b_max {
            if !(b >= 0.0) {
                return invalid("b_max must be non-negative");
            }
        }
        Ok(())
    }

    /// Candidate `(w, b)` pairs in row-major grid order, keeping one of each
    /// pair `(w, b) ~ (-w, -b)` since `sigma^` is even.
    pub fn candidates(&self, d: usize, omega: f64) -> Vec<(Vec<f64>, f64)> {
        let axis = |max: f64, n: usize| -> Vec<f64> {
            if n == 1 {
                vec![0.0]
            } else {
                (0..n).map(|i| -max + 2.0 * max * i as f64 / (n - 1) as f64).collect()
            }
        };
        let ws = axis(self.w_max, self.w_points);
        let bs = axis(self.b_max.unwrap_or(self.w_max * omega * (d as f64).sqrt()), self.b_points);
        let res = vec![ws.len(); d];
        let mut out = Vec::new();
        for flat in 0..ws.len().pow(d as u32) {
            let k = unflatten(flat, &res);
            let w: Vec<f64> = k.iter().map(|&i| ws[i]).collect();
            if w.iter().map(|v| v * v).sum::<f64>().sqrt() > self.w_max * (1.0 + 1e-12) {
                continue;
            }
            for &b in &bs {
                if canonical(&w, b) {
                    out.push((w.clone(), b));
                }
            }
        }
        out
    }
}

/// First non-zero entry of `(w, b)` positive, or all zero.
fn canonical(w: &[f64], b: f64) -> bool {
    for &v in w.iter().chain(std::iter::once(&b)) {
        if v != 0.0 {
            return v > 0.0;
        }
    }
    true
}

/// Tensor Gauss-Legendre rule on the frequency box.
struct FreqRule {
    points: Vec<Vec<f64>>,
    sqrt_w: Vec<f64>,
}

impl FreqRule {
    fn new(d: usize, omega: f64, nodes: usize) -> Result<FreqRule> {
        let total = nodes.checked_pow(d as u32).filter(|&t| t <= 4_000_000);
        let total = total.ok_or_else(|| Error::Resource(format!("{nodes}^{d} quadrature nodes")))?;
        let (x, w) = GaussLegendre::get(nodes).on_interval(-omega, omega);
        let res = vec![nodes; d];
        let mut points = Vec::with_capacity(total);
        let mut sqrt_w = Vec::with_capacity(total);
        for flat in 0..total {
            let k = unflatten(flat, &res);
            points.push(k.iter().map(|&i| x[i]).collect());
            sqrt_w.push(k.iter().map(|&i| w[i]).product::<f64>().sqrt());
        }
        Ok(FreqRule { points, sqrt_w })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthogonal greedy state over the precomputed candidate columns.
pub struct BandlimitedFitter {
    target: BandlimitedTarget,
    config: BandlimitedConfig,
    candidates: Vec<(Vec<f64>, f64)>,
    /// Candidate columns `sqrt(w_j) sigma^(<w, xi_j> + b)`, one per row of `n` values.
    columns: Vec<f64>,
    col_norms: Vec<f64>,
    n: usize,
    y: Vec<f64>,
    target_norm: f64,
    selected: Vec<usize>,
    /// Orthonormal basis of the selected columns and the triangular factor.
    q: Vec<Vec<f64>>,
    r: Vec<Vec<f64>>,
    residual: Vec<f64>,
    residuals: Vec<f64>,
    stopped: bool,
    started: Instant,
}

impl BandlimitedFitter {
    pub fn new(target: &BandlimitedTarget, config: BandlimitedConfig) -> Result<Self> {
        config.validate()?;
        let started = Instant::now();
        let d = target.dim();
        let rule = FreqRule::new(d, target.omega, config.nodes_per_axis)?;
        let n = rule.points.len();
        let y: Vec<f64> = rule
            .points
            .par_iter()
            .zip(rule.sqrt_w.par_iter())
            .map(|(xi, s)| {
                let v = target.profile.value(xi);
                if v.im.abs() > 1e-12 * v.norm().max(1e-300) && v.im.abs() > 1e-14 {
                    Err(Error::InvalidInput("bandlimited fitting needs a real-valued transform".into()))
                } else {
                    Ok(v.re * s)
                }
            })
            .collect::<Result<_>>()?;
        let candidates = config.candidates(d, target.omega);
        let bytes = candidates.len() * n * 8;
        if bytes > 1 << 30 {
            return Err(Error::Resource(format!("candidate matrix needs {bytes} bytes")));
        }
        let sigma = config.sigma;
        let mut columns = vec![0.0; candidates.len() * n];
        columns.par_chunks_mut(n).zip(candidates.par_iter()).for_each(|(col, (w, b))| {
            for (j, v) in col.iter_mut().enumerate() {
                *v = rule.sqrt_w[j] * sigma.eval(dot(w, &rule.points[j]) + b);
            }
        });
        let col_norms: Vec<f64> = columns.par_chunks(n).map(|c| dot(c, c).sqrt()).collect();
        let target_norm = dot(&y, &y).sqrt();
        Ok(BandlimitedFitter {
            target: target.clone(),
            config,
            candidates,
            columns,
            col_norms,
            n,
            residual: y.clone(),
            y,
            target_norm,
            selected: Vec::new(),
            q: Vec::new(),
            r: Vec::new(),
            residuals: Vec::new(),
            stopped: false,
            started,
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates.len()
    }

    pub fn atoms(&self) -> usize {
        self.selected.len()
    }

    pub fn residual_norm(&self) -> f64 {
        dot(&self.residual, &self.residual).sqrt()
    }

    pub fn stopped(&self) -> bool {
        self.stopped
    }

    /// Adds the candidate most correlated with the residual. Returns `false`
    /// (and latches the stop flag) when no candidate helps.
    pub fn step(&mut self) -> bool {
        if self.stopped {
            return false;
        }
        let floor = self.config.stop_tolerance * self.target_norm;
        let before = self.residual_norm();
        if before <= floor || self.target_norm == 0.0 {
            self.stopped = true;
            return false;
        }
        let n = self.n;
        let scores: Vec<f64> = self
            .columns
            .par_chunks(n)
            .zip(self.col_norms.par_iter())
            .map(|(c, &cn)| if cn == 0.0 { 0.0 } else { dot(c, &self.residual).abs() / cn })
            .collect();
        let mut best = None::<usize>;
        for (i, &s) in scores.iter().enumerate() {
            if self.selected.contains(&i) {
                continue;
            }
            if best.is_none_or(|b| s > scores[b]) {
                best = Some(i);
            }
        }
        let Some(k) = best else {
            self.stopped = true;
            return false;
        };
        let col = &self.columns[k * n..(k + 1) * n];
        let mut v = col.to_vec();
        let mut coeffs = vec![0.0; self.q.len() + 1];
        for _ in 0..2 {
            for (i, qi) in self.q.iter().enumerate() {
                let c = dot(qi, &v);
                coeffs[i] += c;
                v.iter_mut().zip(qi).for_each(|(a, b)| *a -= c * b);
            }
        }
        let vn = dot(&v, &v).sqrt();
        if !(vn > 1e-10 * self.col_norms[k]) {
            self.stopped = true;
            return false;
        }
        v.iter_mut().for_each(|a| *a /= vn);
        let proj = dot(&v, &self.residual);
        let after = (before * before - proj * proj).max(0.0).sqrt();
        if before - after < floor {
            self.stopped = true;
            return false;
        }
        coeffs[self.q.len()] = vn;
        self.residual.iter_mut().zip(&v).for_each(|(r, q)| *r -= proj * q);
        self.q.push(v);
        self.r.push(coeffs);
        self.selected.push(k);
        self.residuals.push(self.residual_norm());
        true
    }

    pub fn advance_to(&mut self, width: usize) {
        while self.selected.len() < width && self.step() {}
    }

    /// Coefficients from the triangular factor: `R a = Q^T y`.
    fn coefficients(&self) -> Vec<f64> {
        let k = self.selected.len();
        let rhs: Vec<f64> = self.q.iter().map(|q| dot(q, &self.y)).collect();
        let mut a = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = rhs[i];
            for j in i + 1..k {
                s -= self.r[j][i] * a[j];
            }
            a[i] = s / self.r[i][i];
        }
        a
    }

    pub fn snapshot(&self, width: usize) -> (FourierProfile, FitReport) {
        let a = self.coefficients();
        let atoms: Vec<DictionaryAtom> = self
            .selected
            .iter()
            .zip(&a)
            .map(|(&i, &coef)| DictionaryAtom { w: self.candidates[i].0.clone(), b: self.candidates[i].1, coef })
            .collect();
        let parameters = self
            .selected
            .iter()
            .map(|&i| {
                let (w, b) = &self.candidates[i];
                w.iter().copied().chain(std::iter::once(*b)).collect()
            })
            .collect();
        let profile = FourierProfile::Dictionary {
            omega: self.target.omega,
            d: self.target.dim(),
            sigma: self.config.sigma,
            atoms,
        };
        let report = FitReport {
            kind: FitKind::Bandlimited,
            width,
            atoms: self.selected.len(),
            residuals: self.residuals.clone(),
            parameters,
            target_norm: self.target_norm,
            error: self.residual_norm(),
            order: 0,
            budget_rescale: None,
            early_stop: self.stopped && self.selected.len() < width,
            retries: 0,
            seconds: self.started.elapsed().as_secs_f64(),
        };
        (profile, report)
    }
}

pub fn fit_bandlimited(
    target: &BandlimitedTarget,
    width: usize,
    config: &BandlimitedConfig,
) -> Result<(FourierProfile, FitReport)> {
    if width < 1 {
        return invalid("width must be at least 1");
    }
    let mut fitter = BandlimitedFitter::new(target, config.clone())?;
    fitter.advance_to(width);
    Ok(fitter.snapshot(width))
}

/// Nested fits over strictly increasing widths, warm-started.
pub fn bandlimited_ladder(
    target: &BandlimitedTarget,
    widths: &[usize],
    config: &BandlimitedConfig,
) -> Result<Vec<(FourierProfile, FitReport)>> {
    check_widths(widths)?;
    let mut fitter = BandlimitedFitter::new(target, config.clone())?;
    Ok(widths
        .iter()
        .map(|&w| {
            fitter.advance_to(w);
            fitter.snapshot(w)
        })
        .collect())
}

/// Values of a transform on a composite Gauss-Legendre rule over
/// `[-Omega, Omega]^d`, enough to evaluate weighted `L^2` norms.
#[derive(Debug, Clone, PartialEq)]
pub struct BandlimitedSamples {
    omega: f64,
    d: usize,
    nodes_per_axis: usize,
    weights: Vec<f64>,
    /// `<xi_j>^2` at each node.
    brackets_sq: Vec<f64>,
    values: Vec<Complex64>,
}

impl BandlimitedSamples {
    /// Samples on `panels` Gauss-Legendre panels of `per_panel` nodes per axis.
    pub fn from_profile(profile: &FourierProfile, omega: f64, panels: usize, per_panel: usize) -> Result<Self> {
        profile.validate()?;
        if panels < 1 || per_panel < 1 || !(omega > 0.0) {
            return invalid("sampling rule needs positive sizes and Omega");
        }
        let d = profile.dim();
        let rule = GaussLegendre::get(per_panel);
        let h = 2.0 * omega / panels as f64;
        let (mut xs, mut ws) = (Vec::new(), Vec::new());
        for p in 0..panels {
            let a = -omega + p as f64 * h;
            let (x, w) = rule.on_interval(a, a + h);
            xs.extend(x);
            ws.extend(w);
        }
        let m = xs.len();
        let total = m.checked_pow(d as u32).filter(|&t| t <= 8_000_000);
        let total = total.ok_or_else(|| Error::Resource(format!("{m}^{d} sample nodes")))?;
        let res = vec![m; d];
        let (weights, (brackets_sq, values)): (Vec<f64>, (Vec<f64>, Vec<Complex64>)) = (0..total)
            .into_par_iter()
            .map(|flat| {
                let k = unflatten(flat, &res);
                let xi: Vec<f64> = k.iter().map(|&i| xs[i]).collect();
                let w: f64 = k.iter().map(|&i| ws[i]).product();
                (w, (japanese_bracket(&xi).powi(2), profile.value(&xi)))
            })
            .unzip();
        Ok(BandlimitedSamples { omega, d, nodes_per_axis: m, weights, brackets_sq, values })
    }

    /// Default validation rule: 16 panels of 32 nodes in one dimension,
    /// 8 panels of 12 in two, 4 of 6 beyond.
    pub fn from_profile_default(profile: &FourierProfile, omega: f64) -> Result<Self> {
        let (p, q) = match profile.dim() {
            1 => (16, 32),
            2 => (8, 12),
            _ => (4, 6),
        };
        BandlimitedSamples::from_profile(profile, omega, p, q)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `||<xi>^l f^||_{L^2([-Omega, Omega]^d)}`.
    pub fn weighted_l2(&self, ell: u32) -> f64 {
        let terms: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.brackets_sq)
            .zip(&self.values)
            .map(|((w, b), v)| w * b.powi(ell as i32) * v.norm_sqr())
            .collect();
        pairwise_sum(&terms).sqrt()
    }

    fn same_rule(&self, other: &Self) -> bool {
        self.omega == other.omega && self.d == other.d && self.nodes_per_axis == other.nodes_per_axis
    }
}

impl MetricOperand for BandlimitedSamples {
    fn difference(&self, other: &Self) -> Result<Self> {
        if !self.same_rule(other) {
            return Err(Error::DomainMismatch);
        }
        let mut out = self.clone();
        out.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a -= b);
        Ok(out)
    }
}

/// `p_l(f) = ||<xi>^l f^||_{L^2([-Omega, Omega]^d)}`, the `H^l(R^d)` norm of a
/// function bandlimited to the box.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpectralSobolevLadder;

impl SeminormSequence<BandlimitedSamples> for SpectralSobolevLadder {
    fn seminorm(&self, f: &BandlimitedSamples, ell: u32) -> Result<f64> {
        Ok(f.weighted_l2(ell))
    }

    fn domain(&self) -> Option<&BoxDomain> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParsevalReport {
    /// `||f^ - g^||_{L^2}` by quadrature on the frequency box.
    pub frequency_l2: f64,
    /// `||f - g||_{L^2(R^d)}` from Shannon samples, extrapolated in the cut-off.
    pub spatial_l2: f64,
    pub relative_difference: f64,
    /// Cut-offs `K` and the partial sums `(pi / Omega)^d sum_{|k|_inf <= K} |r(k pi / Omega)|^2`.
    pub cutoffs: Vec<usize>,
    pub partial_sums: Vec<f64>,
}

/// Compares the frequency-side residual norm with the spatial one. The
/// spatial residual is sampled at the Nyquist points `k pi / Omega`, where
/// `||r||^2 = (pi / Omega)^d sum_k |r(k pi / Omega)|^2` holds exactly; its
/// values come from a Gauss-Legendre inverse transform. The `O(1/K)`
/// truncation of that sum is removed by Romberg extrapolation over the
/// cut-offs `K, 2K, 4K, 8K`.
pub fn parseval_check(target: &BandlimitedTarget, approx: &FourierProfile, base_cutoff: Option<usize>) -> Result<ParsevalReport> {
    let d = target.dim();
    if approx.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: approx.dim() });
    }
    if d > 2 {
        return invalid("the spatial Parseval check supports d <= 2");
    }
    let omega = target.omega;
    let residual = |xi: &[f64]| target.profile.value(xi) - approx.value(xi);
    let freq = {
        let diff = BandlimitedSamples::from_profile_default(&target.profile, omega)?
            .difference(&BandlimitedSamples::from_profile_default(approx, omega)?)?;
        diff.weighted_l2(0)
    };
    let k0 = base_cutoff.unwrap_or(if d == 1 { 128 } else { 16 });
    let cutoffs: Vec<usize> = (0..4).map(|i| k0 << i).collect();
    let kmax = cutoffs[3];
    // composite rule resolving e^{i xi x} up to |x| = kmax pi / Omega
    let panels = (kmax / 2).max(8);
    let rule = GaussLegendre::get(24);
    let h = 2.0 * omega / panels as f64;
    let (mut xs, mut ws) = (Vec::new(), Vec::new());
    for p in 0..panels {
        let a = -omega + p as f64 * h;
        let (x, w) = rule.on_interval(a, a + h);
        xs.extend(x);
        ws.extend(w);
    }
    let m = xs.len();
    let nk = 2 * kmax + 1;
    let step = PI / omega;
    let norm = (2.0 * PI).powf(-0.5 * d as f64);
    // |r(x_k)|^2 laid out with index k + kmax per axis
    let samples: Vec<f64> = if d == 1 {
        // e^{i x_k xi} is geometric in k, so each node contributes by recurrence
        let mut acc = vec![Complex64::new(0.0, 0.0); nk];
        for i in 0..m {
            let r = residual(&[xs[i]]) * ws[i];
            let rot = Complex64::from_polar(1.0, xs[i] * step);
            let mut phase = Complex64::from_polar(1.0, -(kmax as f64) * step * xs[i]);
            for a in acc.iter_mut() {
                *a += r * phase;
                phase *= rot;
            }
        }
        acc.iter().map(|v| (v * norm).norm_sqr()).collect()
    } else {
        let e = DMatrix::from_fn(nk, m, |k, i| {
            let x = (k as f64 - kmax as f64) * step;
            Complex64::from_polar(ws[i], xs[i] * x)
        });
        let vals: Vec<Complex64> = (0..m * m)
            .into_par_iter()
            .map(|flat| residual(&[xs[flat / m], xs[flat % m]]))
            .collect();
        let rhat = DMatrix::from_row_slice(m, m, &vals);
        let out = &e * rhat * e.transpose();
        (0..nk * nk).map(|flat| (out[(flat / nk, flat % nk)] * norm).norm_sqr()).collect()
    };
    let cell = step.powi(d as i32);
    let partial_sums: Vec<f64> = cutoffs
        .iter()
        .map(|&k| {
            let lo = kmax - k;
            let hi = kmax + k;
            let terms: Vec<f64> = if d == 1 {
                samples[lo..=hi].to_vec()
            } else {
                (lo..=hi).flat_map(|a| (lo..=hi).map(move |b| (a, b))).map(|(a, b)| samples[a * nk + b]).collect()
            };
            cell * pairwise_sum(&terms)
        })
        .collect();
    // Romberg table with ratio 2 in 1/K
    let mut table = partial_sums.clone();
    for level in 1..table.len() {
        let f = 2f64.powi(level as i32);
        for i in (level..table.len()).rev() {
            table[i] = (f * table[i] - table[i - 1]) / (f - 1.0);
        }
    }
    let spatial = table[table.len() - 1].max(0.0).sqrt();
    let scale = freq.max(spatial);
    let relative_difference = if scale == 0.0 { 0.0 } else { (freq - spatial).abs() / scale };
    Ok(ParsevalReport { frequency_l2: freq, spatial_l2: spatial, relative_difference, cutoffs, partial_sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frechet::FrechetMetric;

    #[test]
    fn candidates_are_deduplicated() {
        let cfg = BandlimitedConfig { w_points: 3, b_points: 3, ..BandlimitedConfig::for_dim(1) };
        let c = cfg.candidates(1, PI);
        // w in {-8, 0, 8}, b in {-B, 0, B}: nine pairs, four mirrored away
        assert_eq!(c.len(), 5);
        assert!(c.contains(&(vec![0.0], 0.0)));
    }

    #[test]
    fn recovers_a_dictionary_atom() {
        let cfg = BandlimitedConfig::for_dim(1);
        let (w, b) = cfg.candidates(1, PI)[700].clone();
        let profile = FourierProfile::Dictionary {
            omega: PI,
            d: 1,
            sigma: cfg.sigma,
            atoms: vec![DictionaryAtom { w, b, coef: 1.7 }],
        };
        let target = BandlimitedTarget::new(profile, PI).unwrap();
        let (_, rep) = fit_bandlimited(&target, 1, &cfg).unwrap();
        assert!(rep.error <= 1e-10 * rep.target_norm, "{}", rep.error);
    }

    #[test]
    fn raised_cosine_errors_do_not_increase() {
        let target = BandlimitedTarget::raised_cosine(PI, 1).unwrap();
        let ladder = bandlimited_ladder(&target, &[2, 4, 8, 16], &BandlimitedConfig::for_dim(1)).unwrap();
        for w in ladder.windows(2) {
            assert!(w[1].1.error <= w[0].1.error);
        }
        let rep = &ladder[3].1;
        assert!(rep.residuals.windows(2).all(|p| p[1] <= p[0]));
    }

    #[test]
    fn oversized_width_stops_early() {
        let cfg = BandlimitedConfig { w_points: 5, b_points: 5, ..BandlimitedConfig::for_dim(1) };
        let target = BandlimitedTarget::raised_cosine(PI, 1).unwrap();
        let (_, rep) = fit_bandlimited(&target, 100, &cfg).unwrap();
        assert!(rep.early_stop);
        assert!(rep.atoms < 100);
    }

    #[test]
    fn parseval_agrees_for_a_fit() {
        let target = BandlimitedTarget::raised_cosine(PI, 1).unwrap();
        let (approx, rep) = fit_bandlimited(&target, 6, &BandlimitedConfig::for_dim(1)).unwrap();
        let p = parseval_check(&target, &approx, None).unwrap();
        assert!(p.relative_difference < 1e-6, "{p:?}");
        assert!((p.frequency_l2 - rep.error).abs() <= 1e-6 * rep.error);
    }

    #[test]
    fn spectral_ladder_on_raised_cosine() {
        // int_{-pi}^{pi} ((1 + cos xi) / 2)^2 dxi = 3 pi / 4
        let f = FourierProfile::raised_cosine(PI, 1);
        let s = BandlimitedSamples::from_profile_default(&f, PI).unwrap();
        assert!((s.weighted_l2(0) - (0.75 * PI).sqrt()).abs() < 1e-12);
        let zero = BandlimitedSamples::from_profile_default(&f.scaled(0.0), PI).unwrap();
        let metric = FrechetMetric::new(SpectralSobolevLadder, 4).unwrap();
        assert_eq!(metric.distance(&s, &s).unwrap().value, 0.0);
        assert!(metric.distance(&s, &zero).unwrap().value > 0.0);
    }
}
