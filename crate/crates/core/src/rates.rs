//! Rate functions with closed-form inverses and the sufficient-width
//! formulas that turn per-seminorm rates into a network width for a
//! target Fréchet accuracy.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::{japanese_bracket_scalar, linear_regression, snap_ceil, to_count};

/// A decreasing bijection `[1, inf) -> (0, r(1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFunction {
    /// `C N^{-r}`.
    Power { c: f64, r: f64 },
    /// `C exp(-c N^gamma)`.
    StretchedExp { big_c: f64, c: f64, gamma: f64 },
}

impl RateFunction {
    pub fn power(c: f64, r: f64) -> Result<Self> {
        RateFunction::Power { c, r }.validated()
    }

    pub fn stretched_exp(big_c: f64, c: f64, gamma: f64) -> Result<Self> {
        RateFunction::StretchedExp { big_c, c, gamma }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        let valid = match self {
            RateFunction::Power { c, r } => ok(c) && ok(r),
            RateFunction::StretchedExp { big_c, c, gamma } => ok(big_c) && ok(c) && ok(gamma),
        };
        if valid {
            Ok(self)
        } else {
            invalid(format!("rate parameters must be positive and finite: {self:?}"))
        }
    }

    pub fn eval(&self, n: f64) -> f64 {
        match *self {
            RateFunction::Power { c, r } => c * n.powf(-r),
            RateFunction::StretchedExp { big_c, c, gamma } => big_c * (-c * n.powf(gamma)).exp(),
        }
    }

    /// `r(1)`, the top of the range.
    pub fn max_value(&self) -> f64 {
        self.eval(1.0)
    }

    /// `r^{-1}(y)` for `y` in `(0, r(1)]`. Values above `r(1)` by at most a
    /// rounding error map to 1.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let top = self.max_value();
        if !(y > 0.0) || y > top * (1.0 + 1e-12) {
            return invalid(format!("rate inverse needs y in (0, {top}], got {y}"));
        }
        if y >= top {
            return Ok(1.0);
        }
        Ok(match *self {
            RateFunction::Power { c, r } => (c / y).powf(1.0 / r),
            RateFunction::StretchedExp { big_c, c, gamma } => ((big_c / y).ln() / c).powf(1.0 / gamma),
        })
    }
}

/// The growth constants `M_l` bounding lower seminorms by higher ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GrowthSequence {
    Constant { m: f64 },
    /// `M_l = <Omega>^l`.
    BracketPower { omega: f64 },
    /// `M_l = values[l]`.
    Explicit { values: Vec<f64> },
}

impl GrowthSequence {
    pub fn value(&self, ell: u32) -> Result<f64> {
        match self {
            GrowthSequence::Constant { m } => Ok(*m),
            GrowthSequence::BracketPower { omega } => Ok(japanese_bracket_scalar(*omega).powi(ell as i32)),
            GrowthSequence::Explicit { values } => match values.get(ell as usize) {
                Some(v) => Ok(*v),
                None => invalid(format!("growth sequence has no entry for l = {ell}")),
            },
        }
    }
}

/// `ceil(-log2 eps) + 1`, with `-log2 eps` snapped to an integer when
/// within `1e-12` of one.
pub fn ell_epsilon(epsilon: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return invalid(format!("epsilon must lie in (0, 1], got {epsilon}"));
    }
    Ok(snap_ceil(-epsilon.log2()) as u32 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthFormula {
    Monotonic,
    Bounded,
    ExpBarron,
    Bandlimited,
}

/// The inputs that produced a [`WidthResult`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WidthInputs {
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub growth: Option<GrowthSequence>,
    /// `M_{l_eps}` as used.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub growth_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rate: Option<RateFunction>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub barron_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c_ell: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub big_c_ell: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthResult {
    pub formula: WidthFormula,
    pub ell_epsilon: u32,
    pub n_sufficient: u64,
    /// The unrounded width, kept because it may exceed `u64`.
    pub n_real: f64,
    /// `n_sufficient` hit `u64::MAX`.
    pub saturated: bool,
    /// The argument passed to `r^{-1}` (or the quantity raised to a power
    /// for the closed-form formulas).
    pub threshold: f64,
    pub inputs: WidthInputs,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn finish(formula: WidthFormula, ell: u32, raw: f64, threshold: f64, inputs: WidthInputs, notes: Vec<String>) -> WidthResult {
    let n_real = snap_ceil(raw).max(1.0);
    let (n, saturated) = to_count(n_real);
    WidthResult { formula, ell_epsilon: ell, n_sufficient: n, n_real, saturated, threshold, inputs, notes }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        invalid(format!("{name} must be positive and finite, got {v}"))
    }
}

fn small_product_note(ell: u32, c_f: f64, m: f64) -> Vec<String> {
    let prod = 2f64.powi(ell as i32) * c_f * m;
    if prod < 1.0 {
        vec![format!("2^l C_f M_l = {prod} < 1; the minimum is taken as displayed")]
    } else {
        Vec::new()
    }
}

/// `N = ceil(r_l^{-1}(min{r_l(1), 1 / (2^l C_f M_l)}))` at `l = l_eps`, for
/// seminorm sequences that grow monotonically on the target.
pub fn width_monotonic(
    epsilon: f64,
    c_f: f64,
    growth: &GrowthSequence,
    rates: &BTreeMap<u32, RateFunction>,
) -> Result<WidthResult> {
    let ell = ell_epsilon(epsilon)?;
    positive("C_f", c_f)?;
    let rate = match rates.get(&ell) {
        Some(r) => r.validated()?,
        None => return invalid(format!("no rate given for l_eps = {ell}")),
    };
    let m = growth.value(ell)?;
    positive("M_l", m)?;
    let threshold = rate.max_value().min(1.0 / (2f64.powi(ell as i32) * c_f * m));
    let raw = rate.inverse(threshold)?;
    let inputs = WidthInputs {
        epsilon,
        c_f: Some(c_f),
        growth: Some(growth.clone()),
        growth_value: Some(m),
        rate: Some(rate),
        ..Default::default()
    };
    Ok(finish(WidthFormula::Monotonic, ell, raw, threshold, inputs, small_product_note(ell, c_f, m)))
}

/// `N = ceil(r^{-1}(min{r(1), 2^{-l} / (C_f M_l)}))` at `l = l_eps`, for
/// seminorm sequences with bounded growth and a single rate.
pub fn width_bounded(epsilon: f64, c_f: f64, growth: &GrowthSequence, rate: &RateFunction) -> Result<WidthResult> {
    let ell = ell_epsilon(epsilon)?;
    positive("C_f", c_f)?;
    let rate = rate.validated()?;
    let m = growth.value(ell)?;
    positive("M_l", m)?;
    let mut notes = small_product_note(ell, c_f, m);
    if m < 1.0 {
        notes.push(format!("growth constant M_l = {m} is below 1"));
    }
    let threshold = rate.max_value().min(0.5f64.powi(ell as i32) / (c_f * m));
    let raw = rate.inverse(threshold)?;
    let inputs = WidthInputs {
        epsilon,
        c_f: Some(c_f),
        growth: Some(growth.clone()),
        growth_value: Some(m),
        rate: Some(rate),
        ..Default::default()
    };
    Ok(finish(WidthFormula::Bounded, ell, raw, threshold, inputs, notes))
}

/// `N = max{1, ceil(((1/c_l) ln(2^l C_l ||f||))^{d/beta})}` for the
/// exponential spectral Barron class.
pub fn width_exp_barron(epsilon: f64, barron_norm: f64, c_ell: f64, big_c_ell: f64, beta: f64, d: u32) -> Result<WidthResult> {
    let ell = ell_epsilon(epsilon)?;
    if !(beta > 0.0 && beta < 1.0) {
        return invalid(format!("beta must lie in (0, 1), got {beta}"));
    }
    positive("Barron norm", barron_norm)?;
    positive("c_l", c_ell)?;
    positive("C_l", big_c_ell)?;
    if d == 0 {
        return invalid("dimension must be positive");
    }
    let log_arg = ell as f64 * std::f64::consts::LN_2 + big_c_ell.ln() + barron_norm.ln();
    let threshold = log_arg / c_ell;
    let raw = if log_arg <= 0.0 { 1.0 } else { threshold.powf(d as f64 / beta) };
    let inputs = WidthInputs {
        epsilon,
        barron_norm: Some(barron_norm),
        c_ell: Some(c_ell),
        big_c_ell: Some(big_c_ell),
        beta: Some(beta),
        d: Some(d),
        ..Default::default()
    };
    Ok(finish(WidthFormula::ExpBarron, ell, raw, threshold, inputs, Vec::new()))
}

/// `N = ceil((2^{-l} / (||f|| M_l))^{-2})` with `M_l = <Omega>^l`, for
/// Barron-bandlimited targets approximated at the Monte-Carlo rate.
pub fn width_bandlimited(epsilon: f64, barron_bl_norm: f64, omega: f64) -> Result<WidthResult> {
    let ell = ell_epsilon(epsilon)?;
    positive("Barron-bandlimited norm", barron_bl_norm)?;
    if !(omega >= 0.0 && omega.is_finite()) {
        return invalid(format!("Omega must be non-negative, got {omega}"));
    }
    let m = japanese_bracket_scalar(omega).powi(ell as i32);
    let threshold = 0.5f64.powi(ell as i32) / (barron_bl_norm * m);
    let raw = threshold.powi(-2);
    let inputs = WidthInputs {
        epsilon,
        barron_norm: Some(barron_bl_norm),
        growth: Some(GrowthSequence::BracketPower { omega }),
        growth_value: Some(m),
        rate: Some(RateFunction::Power { c: 1.0, r: 0.5 }),
        omega: Some(omega),
        ..Default::default()
    };
    Ok(finish(WidthFormula::Bandlimited, ell, raw, threshold, inputs, Vec::new()))
}

/// Which family [`fit_rate`] fits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateFamily {
    Power,
    /// Exponent `gamma` fixed in advance.
    StretchedExp { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FittedRate {
    pub rate: RateFunction,
    pub r_squared: f64,
}

/// Least squares in the linearising coordinates of `family`:
/// `log e` against `log N` (power) or against `N^gamma` (stretched exponential).
pub fn fit_rate(points: &[(f64, f64)], family: RateFamily) -> Result<FittedRate> {
    if points.len() < 4 {
        return invalid(format!("need at least 4 points, got {}", points.len()));
    }
    if points.iter().any(|p| !(p.1 > 0.0)) {
        return invalid("errors must be positive");
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) || points[0].0 <= 0.0 {
        return invalid("N must be positive and strictly increasing");
    }
    let y: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    match family {
        RateFamily::Power => {
            let x: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
            let (a, b, r2) = linear_regression(&x, &y);
            Ok(FittedRate { rate: RateFunction::Power { c: a.exp(), r: -b }, r_squared: r2 })
        }
        RateFamily::StretchedExp { gamma } => {
            if !(gamma > 0.0) {
                return invalid("gamma must be positive");
            }
            let x: Vec<f64> = points.iter().map(|p| p.0.powf(gamma)).collect();
            let (a, b, r2) = linear_regression(&x, &y);
            Ok(FittedRate { rate: RateFunction::StretchedExp { big_c: a.exp(), c: -b, gamma }, r_squared: r2 })
        }
    }
}
