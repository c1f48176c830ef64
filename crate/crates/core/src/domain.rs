//! Box domains and multi-indices.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric;

/// Axis-aligned box `[lower_0, upper_0] x ... x [lower_{d-1}, upper_{d-1}]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Deserialize)]
struct RawBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawBox> for BoxDomain {
    type Error = Error;

    fn try_from(raw: RawBox) -> Result<Self> {
        BoxDomain::new(raw.lower, raw.upper)
    }
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return invalid("box must have at least one axis");
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        for (j, (a, b)) in lower.iter().zip(&upper).enumerate() {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return invalid(format!("axis {j}: need finite lower < upper, got [{a}, {b}]"));
            }
        }
        Ok(BoxDomain { lower, upper })
    }

    /// `[a, b]^d`.
    pub fn cube(d: usize, a: f64, b: f64) -> Result<Self> {
        BoxDomain::new(vec![a; d], vec![b; d])
    }

    /// The unit cube `[0, 1]^d`.
    pub fn unit(d: usize) -> Self {
        BoxDomain::cube(d, 0.0, 1.0).expect("unit cube is valid")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn side(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|j| self.side(j)).product()
    }

    /// `R_U[i] = sup_{x in U} |x_i|`.
    pub fn radius_per_axis(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(a, b)| a.abs().max(b.abs())).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    /// Node `k` of the periodic equispaced grid with `resolution` points per
    /// axis (right endpoint excluded).
    pub fn grid_point(&self, k: &[usize], resolution: &[usize]) -> Vec<f64> {
        (0..self.dim())
            .map(|j| self.lower[j] + k[j] as f64 * (self.upper[j] - self.lower[j]) / resolution[j] as f64)
            .collect()
    }

    pub(crate) fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }
}

/// Multi-index `alpha` in `Z_{>=0}^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|alpha| = sum_j alpha_j`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `alpha! = prod_j alpha_j!`.
    pub fn factorial(&self) -> f64 {
        if self.order() <= 20 {
            self.0.iter().map(|&a| numeric::factorial(a)).product()
        } else {
            self.ln_factorial().exp()
        }
    }

    pub fn ln_factorial(&self) -> f64 {
        self.0.iter().map(|&a| numeric::ln_factorial(a)).sum()
    }

    /// `x^alpha` for a real vector.
    pub fn monomial(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(&a, v)| v.powi(a as i32)).product()
    }

    /// All multi-indices of dimension `d` with `|alpha| <= max_order`,
    /// sorted by order and then lexicographically.
    pub fn up_to(d: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for order in 0..=max_order {
            let mut cur = vec![0u32; d];
            exact_order(d, 0, order, &mut cur, &mut out);
        }
        out
    }

    /// All multi-indices of dimension `d` with `|alpha| == order`.
    pub fn of_order(d: usize, order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; d];
        exact_order(d, 0, order, &mut cur, &mut out);
        out
    }
}

fn exact_order(d: usize, axis: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if axis + 1 == d {
        cur[axis] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for a in (0..=remaining).rev() {
        cur[axis] = a;
        exact_order(d, axis + 1, remaining - a, cur, out);
    }
    cur[axis] = 0;
}
