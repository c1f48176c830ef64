//! Exponential spectral Barron norms, Barron-bandlimited norms, derivative
//! bounds implied by them, Gelfand-Shilov decay checks, and the lower bound
//! for the Barron norm of the oscillating counterexample family.

pub mod multiplier;
pub mod profile;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::domain::{BoxDomain, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::grid::{fft_nd, unflatten};
use crate::numeric::{ln_factorial, pairwise_sum, GaussLegendre};
use crate::spectral::{Differentiable, SpectralFunction};

pub use multiplier::{apply_multiplier, FnSymbol, Symbol};
pub use profile::{DictionaryAtom, FourierProfile, GaussianTerm, GriddedProfile, SigmaHat};

/// Charlier's constant in the Hermite bound `|H_n(x)| e^{-x^2/2} <= k sqrt(2^n n!)`.
pub const CHARLIER_CONSTANT: f64 = 1.086435;

/// Largest radius searched for the truncation of exponentially weighted integrals.
pub const MAX_TRUNCATION_RADIUS: f64 = 1e5;

/// `omega(xi) = exp(c |xi|^beta)`; `c = 0` gives `omega = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarronWeight {
    pub c: f64,
    pub beta: f64,
}

impl BarronWeight {
    pub fn new(c: f64, beta: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite() && beta > 0.0 && beta.is_finite()) {
            return invalid(format!("Barron weight needs c >= 0 and beta > 0, got c={c}, beta={beta}"));
        }
        Ok(BarronWeight { c, beta })
    }

    pub fn unit() -> Self {
        BarronWeight { c: 0.0, beta: 1.0 }
    }

    pub fn ln_eval_radial(&self, r: f64) -> f64 {
        if self.c == 0.0 {
            0.0
        } else {
            self.c * r.powf(self.beta)
        }
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.ln_eval_radial(r).exp()
    }
}

/// Surface area of the unit sphere in `R^d`.
fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(0.5 * d as f64) / gamma(0.5 * d as f64)
}

/// Composite Gauss-Legendre rule on `[0, len]` with geometric grading
/// towards 0 (for `|xi|^beta` kinks) and uniform panels of width `h`.
fn graded_rule(len: f64, h: f64, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::get(nodes);
    let first = h.min(len);
    let mut panels = Vec::new();
    let mut hi = first;
    for _ in 0..40 {
        panels.push((0.5 * hi, hi));
        hi *= 0.5;
    }
    panels.push((0.0, hi));
    let mut a = first;
    while a < len {
        let b = (a + h).min(len);
        panels.push((a, b));
        a = b;
    }
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for (a, b) in panels {
        let (x, w) = rule.on_interval(a, b);
        xs.extend(x);
        ws.extend(w);
    }
    (xs, ws)
}

/// `ln` of the radial upper envelope `sum_k |w_k| (2 a_k)^{-d/2} exp(-r^2 / (4 a_k))`
/// of a Gaussian mixture.
fn gaussian_ln_envelope(terms: &[GaussianTerm], r: f64) -> f64 {
    let d = terms[0].center.len() as f64;
    let lns: Vec<f64> = terms
        .iter()
        .filter(|t| t.weight != 0.0)
        .map(|t| t.weight.abs().ln() - 0.5 * d * (2.0 * t.a).ln() - r * r / (4.0 * t.a))
        .collect();
    let m = lns.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + lns.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Radius where `omega * envelope` falls to `1e-14` of its peak, by
/// bisection. `Divergent` if no such radius exists below the cap.
pub fn truncation_radius(ln_integrand: impl Fn(f64) -> f64) -> Result<(f64, f64)> {
    let mut scan = vec![0.0];
    let mut r = 1e-3;
    while r < MAX_TRUNCATION_RADIUS {
        scan.push(r);
        r *= 1.05;
    }
    scan.push(MAX_TRUNCATION_RADIUS);
    let vals: Vec<f64> = scan.iter().map(|&r| ln_integrand(r)).collect();
    let peak = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cut = peak + 1e-14f64.ln();
    if *vals.last().unwrap() >= cut {
        return Err(Error::Divergent(format!(
            "weighted spectrum does not decay to 1e-14 of its peak before |xi| = {MAX_TRUNCATION_RADIUS}"
        )));
    }
    let last_above = vals.iter().rposition(|&v| v >= cut).unwrap_or(0);
    let (mut lo, mut hi) = (scan[last_above], scan[last_above + 1]);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_integrand(mid) >= cut {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((hi, peak))
}

/// `int omega(xi) |f^(xi)| dxi`.
///
/// Gaussian mixtures are integrated radially up to the truncation radius;
/// compactly supported profiles by a composite tensor rule over their box.
/// Both rules are independent of the weight, so the result is monotone in `c`.
pub fn barron_norm(profile: &FourierProfile, weight: &BarronWeight) -> Result<f64> {
    profile.validate()?;
    BarronWeight::new(weight.c, weight.beta)?;
    if profile.is_zero() {
        return Ok(0.0);
    }
    let d = profile.dim();
    match profile {
        FourierProfile::Gaussian { terms } => {
            let radial = profile.ln_radial_modulus(1.0).is_some();
            if d > 1 && !radial {
                return invalid("Gaussian mixtures in d > 1 need a common centre");
            }
            let ln_h = |r: f64| {
                weight.ln_eval_radial(r)
                    + gaussian_ln_envelope(terms, r)
                    + if d > 1 { (d as f64 - 1.0) * r.ln() } else { 0.0 }
            };
            let (radius, ln_peak) = truncation_radius(ln_h)?;
            let value = radial_integral(profile, terms, weight, radius, ln_peak);
            if !value.is_finite() {
                return Err(Error::Divergent("Barron norm overflows double precision".into()));
            }
            Ok(value)
        }
        _ => {
            let support = profile.support().expect("compact profile");
            let (rule, panels_per_half, nodes) = match (profile, d) {
                (FourierProfile::Gridded(g), _) => (None, g.resolution.iter().copied().max().unwrap_or(2), 4),
                (_, 1) => (Some(()), 16, 24),
                (_, 2) => (Some(()), 6, 16),
                _ => (Some(()), 2, 10),
            };
            let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..d)
                .map(|j| {
                    let (a, b) = (support.lower()[j], support.upper()[j]);
                    if rule.is_none() {
                        if let FourierProfile::Gridded(g) = profile {
                            return cell_aligned_axis(a, b, g.resolution[j], nodes);
                        }
                    }
                    axis_split_at_zero(a, b, panels_per_half, nodes)
                })
                .collect();
            let res: Vec<usize> = axes.iter().map(|a| a.0.len()).collect();
            let total: usize = res.iter().product();
            let terms: Vec<f64> = (0..total)
                .into_par_iter()
                .map(|flat| {
                    let k = unflatten(flat, &res);
                    let xi: Vec<f64> = (0..d).map(|j| axes[j].0[k[j]]).collect();
                    let w: f64 = (0..d).map(|j| axes[j].1[k[j]]).product();
                    w * weight.eval(&xi) * profile.value(&xi).norm()
                })
                .collect::<Vec<f64>>();
            Ok(pairwise_sum(&terms))
        }
    }
}

/// `int_{|xi| <= radius} omega |f^|` for a Gaussian mixture (common centre
/// when `d > 1`), scaled internally by `e^{ln_scale}` against overflow.
fn radial_integral(profile: &FourierProfile, terms: &[GaussianTerm], weight: &BarronWeight, radius: f64, ln_scale: f64) -> f64 {
    let d = profile.dim();
    let a_min = terms.iter().map(|t| t.a).fold(f64::INFINITY, f64::min);
    let panel = 0.25 * (2.0 * a_min).sqrt();
    let (rs, ws) = graded_rule(radius, panel, 20);
    let terms: Vec<f64> = rs
        .par_iter()
        .zip(ws.par_iter())
        .map(|(&r, &w)| {
            let m = if d == 1 {
                profile.value(&[r]).norm() + profile.value(&[-r]).norm()
            } else {
                let mut xi = vec![0.0; d];
                xi[0] = r;
                profile.value(&xi).norm() * r.powi(d as i32 - 1)
            };
            if m == 0.0 {
                0.0
            } else {
                w * (weight.ln_eval_radial(r) + m.ln() - ln_scale).exp()
            }
        })
        .collect();
    let sum = pairwise_sum(&terms);
    let area = if d == 1 { 1.0 } else { sphere_area(d) };
    area * sum * ln_scale.exp()
}

/// Weighted spectral integral over the ball `|xi| <= radius`; used to watch
/// partial sums grow when the weighted spectrum is not integrable.
pub fn barron_partial_integral(profile: &FourierProfile, weight: &BarronWeight, radius: f64) -> Result<f64> {
    profile.validate()?;
    if !(radius > 0.0) {
        return invalid("radius must be positive");
    }
    match profile {
        FourierProfile::Gaussian { terms } => {
            if profile.is_zero() {
                return Ok(0.0);
            }
            if profile.dim() > 1 && profile.ln_radial_modulus(1.0).is_none() {
                return invalid("Gaussian mixtures in d > 1 need a common centre");
            }
            Ok(radial_integral(profile, terms, weight, radius, 0.0))
        }
        _ => invalid("partial integrals are available for Gaussian profiles only"),
    }
}

/// Composite rule on `[a, b]` split at the origin (and graded towards it),
/// `panels` panels per side.
fn axis_split_at_zero(a: f64, b: f64, panels: usize, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    let mut push_side = |from: f64, len: f64, sign: f64| {
        if len <= 0.0 {
            return;
        }
        let (x, w) = graded_rule(len, len / panels as f64, nodes);
        for (xi, wi) in x.into_iter().zip(w) {
            xs.push(from + sign * xi);
            ws.push(wi);
        }
    };
    if a < 0.0 && b > 0.0 {
        push_side(0.0, -a, -1.0);
        push_side(0.0, b, 1.0);
    } else if b <= 0.0 {
        push_side(b, b - a, -1.0);
    } else {
        push_side(a, b - a, 1.0);
    }
    (xs, ws)
}

fn cell_aligned_axis(a: f64, b: f64, res: usize, nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::get(nodes);
    let h = (b - a) / (res - 1) as f64;
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for c in 0..res - 1 {
        let (lo, hi) = (a + c as f64 * h, a + (c + 1) as f64 * h);
        let cuts: Vec<(f64, f64)> = if lo < 0.0 && hi > 0.0 { vec![(lo, 0.0), (0.0, hi)] } else { vec![(lo, hi)] };
        for (l, u) in cuts {
            let (x, w) = rule.on_interval(l, u);
            xs.extend(x);
            ws.extend(w);
        }
    }
    (xs, ws)
}

/// Sampling parameters for [`barron_bl_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlNormConfig {
    /// The transform grid spans `padding` times the support box.
    pub padding: f64,
    pub points_per_axis: usize,
}

impl BlNormConfig {
    pub fn for_dim(d: usize) -> Self {
        match d {
            1 => BlNormConfig { padding: 128.0, points_per_axis: 1 << 22 },
            2 => BlNormConfig { padding: 32.0, points_per_axis: 2048 },
            _ => BlNormConfig { padding: 4.0, points_per_axis: 64 },
        }
    }

    /// Halves the transform-side spacing and keeps the transform-side range.
    pub fn doubled(&self) -> Self {
        BlNormConfig { padding: 2.0 * self.padding, points_per_axis: 2 * self.points_per_axis }
    }
}

/// `int (1 + |w|) |g^(w)| dw` with `g` the zero extension of the compactly
/// supported profile, via a zero-padded FFT.
pub fn barron_bl_norm(profile: &FourierProfile) -> Result<f64> {
    barron_bl_norm_with(profile, &BlNormConfig::for_dim(profile.dim()))
}

pub fn barron_bl_norm_with(profile: &FourierProfile, cfg: &BlNormConfig) -> Result<f64> {
    profile.validate()?;
    let support = profile
        .support()
        .ok_or_else(|| Error::Precondition("profile is not compactly supported".into()))?;
    if profile.is_zero() {
        return Ok(0.0);
    }
    let d = support.dim();
    let (peak, boundary) = peak_and_boundary(profile, &support);
    if boundary > 1e-8 * peak {
        return Err(Error::Precondition(format!(
            "profile does not vanish on the support boundary ({boundary:e} vs peak {peak:e})"
        )));
    }
    let n = cfg.points_per_axis;
    let res = vec![n; d];
    let mut lower = Vec::with_capacity(d);
    let mut step = Vec::with_capacity(d);
    for j in 0..d {
        let c = 0.5 * (support.lower()[j] + support.upper()[j]);
        let span = cfg.padding * support.side(j);
        lower.push(c - 0.5 * span);
        step.push(span / n as f64);
    }
    let total = n.pow(d as u32);
    let mut buf: Vec<Complex64> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let k = unflatten(flat, &res);
            let xi: Vec<f64> = (0..d).map(|j| lower[j] + k[j] as f64 * step[j]).collect();
            profile.value(&xi)
        })
        .collect();
    fft_nd(&mut buf, &res, false);
    let cell: f64 = step.iter().product();
    let scale = (2.0 * PI).powf(-0.5 * d as f64) * cell;
    let dw: Vec<f64> = step.iter().map(|h| 2.0 * PI / (h * n as f64)).collect();
    let dw_vol: f64 = dw.iter().product();
    let terms: Vec<f64> = buf
        .par_iter()
        .enumerate()
        .map(|(flat, v)| {
            let k = unflatten(flat, &res);
            let w2: f64 = (0..d)
                .map(|j| {
                    let s = crate::grid::signed_index(k[j], n) as f64 * dw[j];
                    s * s
                })
                .sum();
            (1.0 + w2.sqrt()) * v.norm() * scale
        })
        .collect::<Vec<f64>>();
    Ok(pairwise_sum(&terms) * dw_vol)
}

fn peak_and_boundary(profile: &FourierProfile, support: &BoxDomain) -> (f64, f64) {
    if let FourierProfile::Gridded(g) = profile {
        let peak = g.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        return (peak, g.boundary_max());
    }
    let d = support.dim();
    let m: usize = if d == 1 { 2001 } else if d == 2 { 201 } else { 21 };
    let res = vec![m; d];
    let mut peak = 0.0f64;
    let mut boundary = 0.0f64;
    for flat in 0..m.pow(d as u32) {
        let k = unflatten(flat, &res);
        let xi: Vec<f64> = (0..d)
            .map(|j| support.lower()[j] + support.side(j) * k[j] as f64 / (m - 1) as f64)
            .collect();
        let v = profile.value(&xi).norm();
        peak = peak.max(v);
        if k.iter().any(|&kj| kj == 0 || kj == m - 1) {
            boundary = boundary.max(v);
        }
    }
    (peak, boundary)
}

/// `||f|| (1 / (c beta))^{|alpha| / beta} (|alpha|!)^{1/beta}`.
pub fn derivative_bound_rhs(weight: &BarronWeight, order: u32, norm: f64) -> Result<f64> {
    if !(weight.c > 0.0 && weight.beta > 0.0) {
        return invalid("derivative bound needs c > 0 and beta > 0");
    }
    if order == 0 {
        return Ok(norm);
    }
    let k = order as f64;
    let ln = -(k / weight.beta) * (weight.c * weight.beta).ln() + ln_factorial(order) / weight.beta;
    if order <= 20 {
        let fact = crate::numeric::factorial(order);
        Ok(norm * (1.0 / (weight.c * weight.beta)).powf(k / weight.beta) * fact.powf(1.0 / weight.beta))
    } else {
        Ok(norm * ln.exp())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRatio {
    pub order: u32,
    /// `max |partial^alpha f(x)| / rhs` over `|alpha| = order` and the grid.
    pub max_ratio: f64,
    pub worst_alpha: MultiIndex,
    pub worst_point: Vec<f64>,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub barron_norm: f64,
    pub weight: BarronWeight,
    pub orders: Vec<OrderRatio>,
    pub violations: usize,
    /// Smallest constant `K` with `|partial^alpha f| <= K rhs` on the grid.
    pub smallest_constant: f64,
}

/// Checks `|partial^alpha f(x)| <= rhs(|alpha|) + 1e-9` for all `|alpha| <=
/// max_order` on a grid over `domain` (endpoints included).
pub fn check_embedding(
    f: &FourierProfile,
    weight: &BarronWeight,
    max_order: u32,
    domain: &BoxDomain,
    points_per_axis: usize,
) -> Result<EmbeddingReport> {
    if f.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), got: f.dim() });
    }
    let norm = barron_norm(f, weight)?;
    let d = domain.dim();
    let m = points_per_axis.max(2);
    let res = vec![m; d];
    let points: Vec<Vec<f64>> = (0..m.pow(d as u32))
        .map(|flat| {
            let k = unflatten(flat, &res);
            (0..d).map(|j| domain.lower()[j] + domain.side(j) * k[j] as f64 / (m - 1) as f64).collect()
        })
        .collect();
    let mut orders = Vec::new();
    for order in 0..=max_order {
        let rhs = derivative_bound_rhs(weight, order, norm)?;
        let mut best = OrderRatio {
            order,
            max_ratio: 0.0,
            worst_alpha: MultiIndex::zero(d),
            worst_point: points[0].clone(),
            violations: 0,
        };
        for alpha in MultiIndex::of_order(d, order) {
            let vals: Vec<f64> = points.par_iter().map(|x| f.derivative(&alpha, x).norm()).collect();
            for (x, v) in points.iter().zip(vals) {
                let ratio = if rhs > 0.0 { v / rhs } else if v > 0.0 { f64::INFINITY } else { 0.0 };
                if v > rhs + 1e-9 {
                    best.violations += 1;
                }
                if ratio > best.max_ratio {
                    best.max_ratio = ratio;
                    best.worst_alpha = alpha.clone();
                    best.worst_point = x.clone();
                }
            }
        }
        orders.push(best);
    }
    let violations = orders.iter().map(|o| o.violations).sum();
    let smallest_constant = orders.iter().map(|o| o.max_ratio).fold(0.0, f64::max);
    Ok(EmbeddingReport { barron_norm: norm, weight: *weight, orders, violations, smallest_constant })
}

/// `e^{|R|^2 / 2} k^d sqrt(2)^{|alpha|} sqrt(|alpha|!)`, the factor bounding
/// `|partial^alpha e^{-|x|^2}|` by a multiple of `e^{-|x|^2}` on a box with
/// per-axis radii `R`.
pub fn gaussian_hermite_bound(alpha: &MultiIndex, radius: &[f64], k: f64) -> f64 {
    let r2: f64 = radius.iter().map(|r| r * r).sum();
    let n = alpha.order();
    (0.5 * r2 + radius.len() as f64 * k.ln() + 0.5 * n as f64 * std::f64::consts::LN_2 + 0.5 * ln_factorial(n)).exp()
}

/// For each `|alpha| <= max_order`, the largest value over a grid on
/// `domain` of `|partial^alpha e^{-|x|^2}| / (bound e^{-|x|^2})`.
pub fn gaussian_bound_ratios(domain: &BoxDomain, max_order: u32, k: f64, points_per_axis: usize) -> Vec<(MultiIndex, f64)> {
    let d = domain.dim();
    let radius = domain.radius_per_axis();
    let m = points_per_axis.max(2);
    let axes: Vec<Vec<f64>> = (0..d)
        .map(|j| (0..m).map(|i| domain.lower()[j] + domain.side(j) * i as f64 / (m - 1) as f64).collect())
        .collect();
    MultiIndex::up_to(d, max_order)
        .into_par_iter()
        .map(|alpha| {
            let bound = gaussian_hermite_bound(&alpha, &radius, k);
            // the ratio factorises: prod_j |H_{alpha_j}(x_j)|, maximised per axis
            let worst: f64 = (0..d)
                .map(|j| {
                    axes[j]
                        .iter()
                        .map(|&x| crate::gevrey::hermite(alpha.0[j], x).abs())
                        .fold(0.0, f64::max)
                })
                .product();
            (alpha, worst / bound)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GelfandShilovParams {
    pub s: f64,
    pub sigma: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GsVerdict {
    /// Both constants finite and stable under range doubling.
    Member,
    /// Some constant changes by more than 5% under range doubling.
    NotMember,
    /// The input has no integrable spectrum (atom sums).
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GelfandShilovReport {
    pub verdict: GsVerdict,
    /// `ln A` for `|f(x)| <= A e^{-r |x|^s}` on `|x| <= X` and `<= 2X`.
    pub ln_spatial: Option<(f64, f64)>,
    /// `ln B` for `|f^(xi)| <= B e^{-r |xi|^sigma}` on `|xi| <= X` and `<= 2X`.
    pub ln_frequency: Option<(f64, f64)>,
    pub range: f64,
}

/// Inputs accepted by [`gelfand_shilov_check`].
pub enum GsInput<'a> {
    Catalog(&'a FourierProfile),
    Atoms(&'a SpectralFunction),
}

/// Estimates the decay constants of `f` and `f^` over `[-range, range]^d`
/// and `[-2 range, 2 range]^d`, in the log domain.
pub fn gelfand_shilov_check(input: GsInput<'_>, params: &GelfandShilovParams, range: f64) -> Result<GelfandShilovReport> {
    if !(params.s > 0.0 && params.sigma > 0.0 && params.r > 0.0 && range > 0.0) {
        return invalid("Gelfand-Shilov parameters and range must be positive");
    }
    let f = match input {
        GsInput::Atoms(_) => {
            return Ok(GelfandShilovReport {
                verdict: GsVerdict::NotApplicable,
                ln_spatial: None,
                ln_frequency: None,
                range,
            })
        }
        GsInput::Catalog(f) => f,
    };
    f.validate()?;
    let d = f.dim();
    let ln_const = |x_max: f64, frequency: bool| -> f64 {
        let m: usize = if d == 1 { 4001 } else { 161 };
        let res = vec![m; d];
        let pts: Vec<Vec<f64>> = (0..m.pow(d as u32))
            .map(|flat| {
                let k = unflatten(flat, &res);
                k.iter().map(|&ki| -x_max + 2.0 * x_max * ki as f64 / (m - 1) as f64).collect()
            })
            .collect();
        let (expo, zero) = if frequency { (params.sigma, MultiIndex::zero(d)) } else { (params.s, MultiIndex::zero(d)) };
        pts.par_iter()
            .map(|x| {
                let v = if frequency { f.value(x).norm() } else { f.derivative(&zero, x).norm() };
                let rad = x.iter().map(|t| t * t).sum::<f64>().sqrt();
                let ln_v = match (f, frequency) {
                    (FourierProfile::Gaussian { terms }, false) if terms.len() == 1 => {
                        // closed form avoids underflow far out
                        let t = &terms[0];
                        let r2: f64 = x.iter().zip(&t.center).map(|(a, b)| (a - b) * (a - b)).sum();
                        t.weight.abs().ln() - t.a * r2
                    }
                    (FourierProfile::Gaussian { terms }, true) if terms.len() == 1 => {
                        let t = &terms[0];
                        t.weight.abs().ln() - 0.5 * d as f64 * (2.0 * t.a).ln() - rad * rad / (4.0 * t.a)
                    }
                    _ => v.ln(),
                };
                ln_v + params.r * rad.powf(expo)
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)
    };
    let sp = (ln_const(range, false), ln_const(2.0 * range, false));
    let fr = (ln_const(range, true), ln_const(2.0 * range, true));
    let stable = |p: (f64, f64)| p.0.is_finite() && p.1.is_finite() && ((p.1 - p.0).exp() - 1.0).abs() <= 0.05;
    let verdict = if stable(sp) && stable(fr) { GsVerdict::Member } else { GsVerdict::NotMember };
    Ok(GelfandShilovReport { verdict, ln_spatial: Some(sp), ln_frequency: Some(fr), range })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleBound {
    pub value: f64,
    pub ln_value: f64,
    /// `floor(n^beta c beta) < 1`: the bound degenerates to 0.
    pub trivial: bool,
}

/// `|U|^{-1/2} ((1 / (sqrt(2 pi) m)) e^{m - 1})^{1/beta}` with
/// `m = floor(n^beta c beta)`: a lower bound for the weighted Barron norm of
/// `cos(n x) / sqrt(pi)`. The derivation uses submultiplicativity of the
/// weight, which fails for `beta > 1`, so such weights are rejected.
pub fn counterexample_lower_bound(n: u64, weight: &BarronWeight, domain_volume: f64) -> Result<CounterexampleBound> {
    if n < 1 || !(domain_volume > 0.0) || !(weight.c > 0.0 && weight.beta > 0.0 && weight.beta <= 1.0) {
        return invalid("need n >= 1, positive volume, c > 0 and beta in (0, 1]");
    }
    let m = ((n as f64).powf(weight.beta) * weight.c * weight.beta).floor();
    if m < 1.0 {
        return Ok(CounterexampleBound { value: 0.0, ln_value: f64::NEG_INFINITY, trivial: true });
    }
    let ln_value = -0.5 * domain_volume.ln() + (-((2.0 * PI).sqrt() * m).ln() + m - 1.0) / weight.beta;
    Ok(CounterexampleBound { value: ln_value.exp(), ln_value, trivial: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_norm_unweighted() {
        let g = FourierProfile::gaussian(1.0, 1);
        let v = barron_norm(&g, &BarronWeight::unit()).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-10, "{v}");
        assert_eq!(barron_norm(&g.scaled(0.0), &BarronWeight::unit()).unwrap(), 0.0);
    }

    #[test]
    fn gaussian_norm_in_two_dimensions() {
        // int (1/2) e^{-|xi|^2 / 4} dxi over R^2 = 2 pi
        let g = FourierProfile::gaussian(1.0, 2);
        let v = barron_norm(&g, &BarronWeight::unit()).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-9, "{v}");
    }

    #[test]
    fn divergent_weight_is_reported() {
        let g = FourierProfile::gaussian(1.0, 1);
        let w = BarronWeight::new(1.0, 2.0).unwrap();
        assert!(matches!(barron_norm(&g, &w), Err(Error::Divergent(_))));
    }

    #[test]
    fn raised_cosine_unweighted_norm() {
        // int_{-pi}^{pi} (1 + cos xi)/2 dxi = pi
        let f = FourierProfile::raised_cosine(PI, 1);
        let v = barron_norm(&f, &BarronWeight::unit()).unwrap();
        assert!((v - PI).abs() < 1e-12);
    }

    #[test]
    fn bl_norm_guards() {
        assert_eq!(barron_bl_norm(&FourierProfile::raised_cosine(PI, 1).scaled(0.0)).unwrap(), 0.0);
        assert!(matches!(barron_bl_norm(&FourierProfile::gaussian(1.0, 1)), Err(Error::Precondition(_))));
        let flat = GriddedProfile::from_fn(vec![-1.0], vec![1.0], vec![11], |_| Complex64::new(1.0, 0.0));
        assert!(matches!(barron_bl_norm(&FourierProfile::Gridded(flat)), Err(Error::Precondition(_))));
    }

    #[test]
    fn derivative_bound_examples() {
        let w = BarronWeight::new(1.0, 0.5).unwrap();
        assert_eq!(derivative_bound_rhs(&w, 0, 3.5).unwrap(), 3.5);
        assert!((derivative_bound_rhs(&w, 2, 1.0).unwrap() - 64.0).abs() < 1e-12);
        let w = BarronWeight::new(2.0, 1.0).unwrap();
        assert!((derivative_bound_rhs(&w, 3, 1.0).unwrap() - 0.75).abs() < 1e-15);
        // log-domain branch agrees with the direct one at the switch-over
        let w = BarronWeight::new(1.3, 0.7).unwrap();
        let direct = derivative_bound_rhs(&w, 20, 1.0).unwrap();
        let ln21 = derivative_bound_rhs(&w, 21, 1.0).unwrap();
        let ratio = ln21 / direct;
        let expected = (1.0f64 / (1.3 * 0.7)).powf(1.0 / 0.7) * 21f64.powf(1.0 / 0.7);
        assert!((ratio / expected - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hermite_bound_coefficient() {
        let c = gaussian_hermite_bound(&MultiIndex(vec![0]), &[0.0], CHARLIER_CONSTANT);
        assert!((c - CHARLIER_CONSTANT).abs() < 1e-14);
        let c = gaussian_hermite_bound(&MultiIndex(vec![0, 0]), &[0.0, 0.0], CHARLIER_CONSTANT);
        assert!((c - CHARLIER_CONSTANT.powi(2)).abs() < 1e-14);
    }

    #[test]
    fn first_and_second_derivative_bounds_hold() {
        // |2x e^{-x^2}| <= k sqrt2 e^{R^2/2} e^{-x^2} on [-1, 1] at 1e4 points
        let dom = BoxDomain::cube(1, -1.0, 1.0).unwrap();
        let bound = gaussian_hermite_bound(&MultiIndex(vec![1]), &dom.radius_per_axis(), CHARLIER_CONSTANT);
        for i in 0..10_000 {
            let x = -1.0 + 2.0 * i as f64 / 9_999.0;
            assert!((2.0 * x).abs() * (-x * x).exp() <= bound * (-x * x).exp());
        }
        let dom = BoxDomain::cube(1, -2.0, 2.0).unwrap();
        let bound = gaussian_hermite_bound(&MultiIndex(vec![2]), &dom.radius_per_axis(), CHARLIER_CONSTANT);
        for i in 0..10_000 {
            let x = -2.0 + 4.0 * i as f64 / 9_999.0;
            assert!((4.0 * x * x - 2.0).abs() <= bound);
        }
    }

    #[test]
    fn counterexample_bound_examples() {
        let w = BarronWeight::new(2.0, 0.5).unwrap();
        let vol = 2.0 * PI;
        assert!(counterexample_lower_bound(0, &w, vol).is_err());
        assert!(counterexample_lower_bound(4, &BarronWeight::new(2.0, 1.5).unwrap(), vol).is_err());
        let tiny = BarronWeight::new(0.1, 0.5).unwrap();
        assert!(counterexample_lower_bound(4, &tiny, vol).unwrap().trivial);

        let b = counterexample_lower_bound(4, &w, vol).unwrap();
        let hand = (1.0 / (2.0 * PI).sqrt()) * ((1.0 / ((2.0 * PI).sqrt() * 2.0)) * std::f64::consts::E).powi(2);
        assert!((b.value / hand - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gelfand_shilov_examples() {
        let g = FourierProfile::gaussian(1.0, 1);
        let p = GelfandShilovParams { s: 2.0, sigma: 2.0, r: 0.25 };
        let r = gelfand_shilov_check(GsInput::Catalog(&g), &p, 8.0).unwrap();
        assert_eq!(r.verdict, GsVerdict::Member);

        let p = GelfandShilovParams { s: 1.0, sigma: 1.0, r: 1.0 };
        let r = gelfand_shilov_check(GsInput::Catalog(&g), &p, 8.0).unwrap();
        assert_eq!(r.verdict, GsVerdict::Member);
        // e^{-x^2} <= e^{1/4} e^{-|x|}
        assert!((r.ln_spatial.unwrap().0 - 0.25).abs() < 1e-5);

        let p = GelfandShilovParams { s: 3.0, sigma: 2.0, r: 1.0 };
        let r = gelfand_shilov_check(GsInput::Catalog(&g), &p, 8.0).unwrap();
        assert_eq!(r.verdict, GsVerdict::NotMember);

        let s = SpectralFunction::sine(BoxDomain::cube(1, 0.0, 2.0 * PI).unwrap(), 1.0, 1.0).unwrap();
        let r = gelfand_shilov_check(GsInput::Atoms(&s), &p, 8.0).unwrap();
        assert_eq!(r.verdict, GsVerdict::NotApplicable);
    }
}
