//! The Fréchet metric `d(f, g) = sum_l 2^{-l} p_l(f - g) / (1 + p_l(f - g))`
//! truncated at a finite level with an explicit tail bound.

use rayon::prelude::*;

use crate::domain::BoxDomain;
use crate::error::{invalid, Error, Result};
use crate::seminorms::SeminormSequence;
use crate::spectral::SpectralFunction;

/// Functions the metric can compare: they must support subtraction.
pub trait MetricOperand: Sized + Sync {
    fn difference(&self, other: &Self) -> Result<Self>;

    fn domain(&self) -> Option<&BoxDomain> {
        None
    }
}

impl MetricOperand for SpectralFunction {
    fn difference(&self, other: &Self) -> Result<Self> {
        self.sub(other)
    }

    fn domain(&self) -> Option<&BoxDomain> {
        Some(SpectralFunction::domain(self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetValue {
    pub value: f64,
    /// Upper bound on the omitted terms `l > L`: the true distance lies in
    /// `[value, value + tail_bound]`.
    pub tail_bound: f64,
}

pub struct FrechetMetric<S> {
    pub seminorms: S,
    pub truncation_level: u32,
}

/// `ceil(-log2 tol) + 2`.
pub fn default_truncation_level(tolerance: f64) -> Result<u32> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return invalid(format!("tolerance must be positive, got {tolerance}"));
    }
    let l = crate::numeric::snap_ceil(-tolerance.log2()) + 2.0;
    Ok(l.max(1.0) as u32)
}

/// `sum_{l <= L} 2^{-l} p_l / (1 + p_l)` for precomputed seminorm values.
pub fn frechet_sum(seminorms: &[f64]) -> f64 {
    seminorms
        .iter()
        .enumerate()
        .map(|(l, p)| 0.5f64.powi(l as i32) * p / (1.0 + p))
        .sum()
}

impl<S> FrechetMetric<S> {
    pub fn new(seminorms: S, truncation_level: u32) -> Result<Self> {
        if truncation_level < 1 {
            return invalid("truncation level must be at least 1");
        }
        Ok(FrechetMetric { seminorms, truncation_level })
    }

    pub fn for_tolerance(seminorms: S, tolerance: f64) -> Result<Self> {
        FrechetMetric::new(seminorms, default_truncation_level(tolerance)?)
    }

    pub fn tail_bound(&self) -> f64 {
        0.5f64.powi(self.truncation_level as i32)
    }

    /// Distance of `r` from zero.
    pub fn norm<F>(&self, r: &F) -> Result<FrechetValue>
    where
        S: SeminormSequence<F>,
        F: MetricOperand,
    {
        if let (Some(a), Some(b)) = (self.seminorms.domain(), r.domain()) {
            if a != b {
                return Err(Error::DomainMismatch);
            }
        }
        let p = self.seminorms.seminorms_upto(r, self.truncation_level)?;
        Ok(FrechetValue { value: frechet_sum(&p), tail_bound: self.tail_bound() })
    }

    pub fn distance<F>(&self, f: &F, g: &F) -> Result<FrechetValue>
    where
        S: SeminormSequence<F>,
        F: MetricOperand,
    {
        if let (Some(a), Some(b)) = (f.domain(), g.domain()) {
            if a != b {
                return Err(Error::DomainMismatch);
            }
        }
        self.norm(&f.difference(g)?)
    }
}

/// Distance from `target` to every candidate, evaluated concurrently;
/// returns the minimiser with ties going to the lowest index.
pub fn best_error<F, S>(target: &F, candidates: &[F], metric: &FrechetMetric<S>) -> Result<(usize, FrechetValue)>
where
    S: SeminormSequence<F>,
    F: MetricOperand,
{
    if candidates.is_empty() {
        return invalid("candidate list is empty");
    }
    let values: Vec<FrechetValue> = candidates
        .par_iter()
        .map(|c| metric.distance(target, c))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v.value < values[best].value {
            best = i;
        }
    }
    Ok((best, values[best]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedBound {
    pub value: f64,
    /// Set when `M_l < 1`, outside the regime the bound is derived for.
    pub warning: Option<String>,
}

/// `(2 - 2^{-l}) M p / (1 + M p) + 2^{-l}`.
pub fn truncated_upper_bound(p: f64, m: f64, ell: u32) -> Result<TruncatedBound> {
    if !(p >= 0.0) || !(m >= 0.0) {
        return invalid(format!("seminorm value and growth constant must be non-negative, got p={p}, M={m}"));
    }
    let tail = 0.5f64.powi(ell as i32);
    let mp = m * p;
    let ratio = if mp.is_infinite() { 1.0 } else { mp / (1.0 + mp) };
    let warning = (m < 1.0).then(|| format!("growth constant M={m} is below 1"));
    Ok(TruncatedBound { value: (2.0 - tail) * ratio + tail, warning })
}
