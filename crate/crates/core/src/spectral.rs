//! Finite sums of complex exponential atoms `sum_n a_n exp(i theta_n . x)`.
//!
//! This is the common carrier for targets, cosine networks and residuals.
//! Real-valued functions are represented by conjugate-symmetric atom pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{BoxDomain, MultiIndex};
use crate::error::{invalid, Error, Result};
use crate::grid::GridFunction;

/// Frequencies closer than this (per axis) are merged by [`SpectralFunction::canonicalize`].
pub const MERGE_TOLERANCE: f64 = 1e-12;

/// Upper bound on the number of grid samples [`SpectralFunction::sample`] will produce.
pub const DEFAULT_SAMPLE_BUDGET: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub amplitude: Complex64,
    pub frequency: Vec<f64>,
}

impl Atom {
    pub fn new(amplitude: Complex64, frequency: Vec<f64>) -> Self {
        Atom { amplitude, frequency }
    }

    fn phase(&self, x: &[f64]) -> f64 {
        self.frequency.iter().zip(x).map(|(t, v)| t * v).sum()
    }
}

/// Anything with pointwise-computable partial derivatives on a box.
pub trait Differentiable: Sync {
    fn dim(&self) -> usize;

    /// `partial^alpha f(x)`.
    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Complex64;

    fn value(&self, x: &[f64]) -> Complex64 {
        self.derivative(&MultiIndex::zero(self.dim()), x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SpectralJson", try_from = "SpectralJson")]
pub struct SpectralFunction {
    domain: BoxDomain,
    atoms: Vec<Atom>,
}

impl SpectralFunction {
    pub fn new(domain: BoxDomain, atoms: Vec<Atom>) -> Result<Self> {
        let d = domain.dim();
        for atom in &atoms {
            if atom.frequency.len() != d {
                return Err(Error::DimensionMismatch { expected: d, got: atom.frequency.len() });
            }
            if atom.frequency.iter().any(|t| !t.is_finite()) {
                return invalid("atom frequencies must be finite");
            }
            if !(atom.amplitude.re.is_finite() && atom.amplitude.im.is_finite()) {
                return invalid("atom amplitudes must be finite");
            }
        }
        Ok(SpectralFunction { domain, atoms })
    }

    pub fn zero(domain: BoxDomain) -> Self {
        SpectralFunction { domain, atoms: Vec::new() }
    }

    /// `amplitude * exp(i theta . x)`.
    pub fn single(domain: BoxDomain, amplitude: Complex64, frequency: Vec<f64>) -> Result<Self> {
        SpectralFunction::new(domain, vec![Atom::new(amplitude, frequency)])
    }

    /// `amplitude * sin(n x)` on a one-dimensional domain, via Euler's identity.
    pub fn sine(domain: BoxDomain, n: f64, amplitude: f64) -> Result<Self> {
        let half = Complex64::new(0.0, -0.5 * amplitude); // amplitude / (2i)
        SpectralFunction::new(domain, vec![Atom::new(half, vec![n]), Atom::new(-half, vec![-n])])
    }

    /// `amplitude * cos(n x)` on a one-dimensional domain.
    pub fn cosine(domain: BoxDomain, n: f64, amplitude: f64) -> Result<Self> {
        let half = Complex64::new(0.5 * amplitude, 0.0);
        SpectralFunction::new(domain, vec![Atom::new(half, vec![n]), Atom::new(half, vec![-n])])
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn frequencies(&self) -> Vec<Vec<f64>> {
        self.atoms.iter().map(|a| a.frequency.clone()).collect()
    }

    pub fn amplitudes(&self) -> Vec<Complex64> {
        self.atoms.iter().map(|a| a.amplitude).collect()
    }

    /// `sum_n |a_n|`.
    pub fn l1_amplitude(&self) -> f64 {
        self.atoms.iter().map(|a| a.amplitude.norm()).sum()
    }

    pub fn max_abs_frequency(&self) -> f64 {
        self.atoms
            .iter()
            .flat_map(|a| a.frequency.iter())
            .fold(0.0f64, |m, t| m.max(t.abs()))
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Complex64> {
        self.domain.check_point(x)?;
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[f64]) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| a.amplitude * Complex64::from_polar(1.0, a.phase(x)))
            .sum()
    }

    /// Sum as atom concatenation.
    pub fn add(&self, other: &SpectralFunction) -> Result<SpectralFunction> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        Ok(SpectralFunction { domain: self.domain.clone(), atoms })
    }

    pub fn sub(&self, other: &SpectralFunction) -> Result<SpectralFunction> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> SpectralFunction {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom::new(a.amplitude * c, a.frequency.clone()))
            .collect();
        SpectralFunction { domain: self.domain.clone(), atoms }
    }

    /// Merges atoms whose frequencies agree within [`MERGE_TOLERANCE`] on
    /// every axis, and drops atoms with zero amplitude. The output is sorted
    /// lexicographically by frequency.
    pub fn canonicalize(&self) -> SpectralFunction {
        let mut sorted = self.atoms.clone();
        sorted.sort_by(|a, b| {
            a.frequency
                .iter()
                .zip(&b.frequency)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut merged: Vec<Atom> = Vec::with_capacity(sorted.len());
        for atom in sorted {
            if let Some(last) = merged.last_mut() {
                let close = last
                    .frequency
                    .iter()
                    .zip(&atom.frequency)
                    .all(|(x, y)| (x - y).abs() <= MERGE_TOLERANCE);
                if close {
                    last.amplitude += atom.amplitude;
                    continue;
                }
            }
            merged.push(atom);
        }
        merged.retain(|a| a.amplitude != Complex64::new(0.0, 0.0));
        SpectralFunction { domain: self.domain.clone(), atoms: merged }
    }

    pub fn sample(&self, resolution: &[usize]) -> Result<GridFunction> {
        self.sample_with_budget(resolution, DEFAULT_SAMPLE_BUDGET)
    }

    /// Evaluates on the periodic grid of `self.domain()`.
    pub fn sample_with_budget(&self, resolution: &[usize], budget: usize) -> Result<GridFunction> {
        let d = self.dim();
        if resolution.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: resolution.len() });
        }
        if resolution.iter().any(|&r| r < 2) {
            return invalid("grid resolution must be at least 2 per axis");
        }
        let total = resolution
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .filter(|&t| t <= budget)
            .ok_or_else(|| Error::Resource(format!("grid {resolution:?} exceeds sample budget {budget}")))?;
        let mut samples = Vec::with_capacity(total);
        let mut idx = vec![0usize; d];
        for _ in 0..total {
            let x = self.domain.grid_point(&idx, resolution);
            samples.push(self.eval_unchecked(&x));
            for j in (0..d).rev() {
                idx[j] += 1;
                if idx[j] < resolution[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
        GridFunction::new(self.domain.clone(), resolution.to_vec(), samples)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `(i theta)^alpha`.
pub fn derivative_factor(alpha: &MultiIndex, theta: &[f64]) -> Complex64 {
    let k = alpha.order();
    let i_pow = match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    i_pow * alpha.monomial(theta)
}

impl Differentiable for SpectralFunction {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn derivative(&self, alpha: &MultiIndex, x: &[f64]) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| a.amplitude * derivative_factor(alpha, &a.frequency) * Complex64::from_polar(1.0, a.phase(x)))
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct SpectralJson {
    domain: BoxDomain,
    atoms: Vec<AtomJson>,
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    re: f64,
    im: f64,
    freq: Vec<f64>,
}

impl From<SpectralFunction> for SpectralJson {
    fn from(f: SpectralFunction) -> Self {
        SpectralJson {
            domain: f.domain,
            atoms: f
                .atoms
                .into_iter()
                .map(|a| AtomJson { re: a.amplitude.re, im: a.amplitude.im, freq: a.frequency })
                .collect(),
        }
    }
}

impl TryFrom<SpectralJson> for SpectralFunction {
    type Error = Error;

    fn try_from(j: SpectralJson) -> Result<Self> {
        let atoms = j
            .atoms
            .into_iter()
            .map(|a| Atom::new(Complex64::new(a.re, a.im), a.freq))
            .collect();
        SpectralFunction::new(j.domain, atoms)
    }
}
