//! Gelfand-Shilov to Barron inclusion evidence and the Gaussian as a
//! self-weighted Gevrey symbol.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barron::{
    barron_norm, barron_partial_integral, gaussian_bound_ratios, gaussian_hermite_bound, BarronWeight, FourierProfile,
    CHARLIER_CONSTANT,
};
use crate::domain::{BoxDomain, MultiIndex};
use crate::error::{Error, Result};

/// Physicists' Hermite polynomial by `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InclusionVerdict {
    Finite,
    Divergent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionCase {
    pub beta: f64,
    pub h: f64,
    pub verdict: InclusionVerdict,
    /// The weighted norm when finite.
    pub norm: Option<f64>,
    /// Partial integrals over `|xi| <= R` for the radii in `radii`.
    pub partial_sums: Vec<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub function_id: String,
    pub radii: Vec<f64>,
    pub cases: Vec<InclusionCase>,
    /// Finite at `h` implies finite at every smaller `h` in the list.
    pub monotone: bool,
}

impl InclusionReport {
    pub fn to_text(&self) -> String {
        let mut out = format!("inclusion check for {}\n", self.function_id);
        for c in &self.cases {
            let norm = c.norm.map(|v| format!("{v:e}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!("  beta={} h={}: {:?} norm={} ({})\n", c.beta, c.h, c.verdict, norm, c.detail));
        }
        out.push_str(&format!("  monotone in h: {}\n", self.monotone));
        out
    }
}

/// Radii at which partial sums are recorded: `4, 8, ..., 128`.
pub const PARTIAL_RADII: [f64; 6] = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0];

/// For each `h` computes the Barron norm under `e^{h |xi|^beta}`. A case is
/// divergent when the norm computation reports divergence or when the
/// partial sums grow more than tenfold between two consecutive radii beyond
/// the bulk of the spectrum.
pub fn gs_to_barron_check(function_id: &str, f: &FourierProfile, beta: f64, h_list: &[f64]) -> InclusionReport {
    let radii = PARTIAL_RADII.to_vec();
    let cases: Vec<InclusionCase> = h_list
        .par_iter()
        .map(|&h| {
            let weight = match BarronWeight::new(h, beta) {
                Ok(w) => w,
                Err(e) => {
                    return InclusionCase {
                        beta,
                        h,
                        verdict: InclusionVerdict::Divergent,
                        norm: None,
                        partial_sums: vec![],
                        detail: e.to_string(),
                    }
                }
            };
            let partial_sums: Vec<f64> = match f {
                FourierProfile::Gaussian { .. } => radii
                    .iter()
                    .map(|&r| barron_partial_integral(f, &weight, r).unwrap_or(f64::NAN))
                    .collect(),
                _ => vec![],
            };
            let growth = partial_sums
                .windows(3)
                .any(|w| !w[2].is_finite() || (w[1] > 0.0 && w[2] > 10.0 * w[1] && w[1] > 10.0 * w[0]));
            match barron_norm(f, &weight) {
                Ok(v) if !growth => InclusionCase {
                    beta,
                    h,
                    verdict: InclusionVerdict::Finite,
                    norm: Some(v),
                    partial_sums,
                    detail: "weighted spectrum integrable".into(),
                },
                Ok(_) => InclusionCase {
                    beta,
                    h,
                    verdict: InclusionVerdict::Divergent,
                    norm: None,
                    partial_sums,
                    detail: "partial sums grow more than tenfold per radius doubling".into(),
                },
                Err(Error::Divergent(msg)) => InclusionCase {
                    beta,
                    h,
                    verdict: InclusionVerdict::Divergent,
                    norm: None,
                    partial_sums,
                    detail: msg,
                },
                Err(e) => InclusionCase {
                    beta,
                    h,
                    verdict: InclusionVerdict::Divergent,
                    norm: None,
                    partial_sums,
                    detail: e.to_string(),
                },
            }
        })
        .collect();
    let monotone = cases.iter().all(|c| {
        c.verdict == InclusionVerdict::Divergent
            || cases.iter().filter(|o| o.h < c.h).all(|o| o.verdict == InclusionVerdict::Finite)
    });
    InclusionReport { function_id: function_id.to_string(), radii, cases, monotone }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GevreyRow {
    pub alpha: MultiIndex,
    pub bound: f64,
    /// `max |partial^alpha f| / (bound |f|)` over the grid, `f = e^{-|x|^2}`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GevreyReport {
    pub radius: Vec<f64>,
    pub constant: f64,
    pub rows: Vec<GevreyRow>,
    pub all_within: bool,
    /// Compactly supported bumps cannot be self-weighted Gevrey symbols;
    /// recorded as text only.
    pub remarks: String,
}

/// Tabulates the Hermite-based derivative bound for `e^{-|x|^2}` on the
/// centred box with half-widths `radius`.
pub fn gevrey_gaussian_demo(radius: &[f64], max_order: u32) -> Result<GevreyReport> {
    let lower: Vec<f64> = radius.iter().map(|r| -r).collect();
    let domain = BoxDomain::new(lower, radius.to_vec())?;
    let points = if radius.len() == 1 { 10_001 } else { 401 };
    let rows: Vec<GevreyRow> = gaussian_bound_ratios(&domain, max_order, CHARLIER_CONSTANT, points)
        .into_iter()
        .map(|(alpha, ratio)| GevreyRow { bound: gaussian_hermite_bound(&alpha, radius, CHARLIER_CONSTANT), alpha, ratio })
        .collect();
    let all_within = rows.iter().all(|r| r.ratio <= 1.0);
    Ok(GevreyReport {
        radius: radius.to_vec(),
        constant: CHARLIER_CONSTANT,
        rows,
        all_within,
        remarks: "a function vanishing on an open set cannot bound its own derivatives this way, \
                  so no bump function is a self-weighted Gevrey symbol"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_matches_explicit_polynomials() {
        let explicit = [
            |_: f64| 1.0,
            |x: f64| 2.0 * x,
            |x: f64| 4.0 * x * x - 2.0,
            |x: f64| 8.0 * x.powi(3) - 12.0 * x,
            |x: f64| 16.0 * x.powi(4) - 48.0 * x * x + 12.0,
            |x: f64| 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x,
        ];
        // integer points keep both sides exact
        for (n, p) in explicit.iter().enumerate() {
            for x in -4..=4 {
                assert_eq!(hermite(n as u32, x as f64), p(x as f64));
            }
        }
    }

    #[test]
    fn gaussian_inclusion() {
        let g = FourierProfile::gaussian(1.0, 1);
        let r = gs_to_barron_check("gaussian", &g, 0.5, &[0.5, 1.0, 2.0]);
        assert!(r.cases.iter().all(|c| c.verdict == InclusionVerdict::Finite));
        assert!(r.monotone);
        let n: Vec<f64> = r.cases.iter().map(|c| c.norm.unwrap()).collect();
        assert!(n[0] < n[1] && n[1] < n[2]);

        let r = gs_to_barron_check("gaussian", &g, 2.0, &[1.0]);
        assert_eq!(r.cases[0].verdict, InclusionVerdict::Divergent);

        let r = gs_to_barron_check("zero", &g.scaled(0.0), 0.5, &[0.5, 1.0, 2.0]);
        assert!(r.cases.iter().all(|c| c.norm == Some(0.0)));
    }

    #[test]
    fn gaussian_gevrey_bounds() {
        let r = gevrey_gaussian_demo(&[1.0], 8).unwrap();
        assert!(r.all_within);
        assert!(r.rows[0].bound >= 1.0);
        let r = gevrey_gaussian_demo(&[1.0, 1.0], 4).unwrap();
        assert!(r.all_within);
        assert_eq!(r.rows.len(), 15);
    }
}
