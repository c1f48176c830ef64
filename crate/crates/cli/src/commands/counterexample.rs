use std::f64::consts::PI;

use frechet_approx::barron::{counterexample_lower_bound, BarronWeight};
use frechet_approx::seminorms::{derivative_l2_norm, sobolev_norm};
use frechet_approx::{BoxDomain, MultiIndex, SpectralFunction};

use crate::config::CounterexampleParams;
use crate::error::{CliError, CliResult};
use crate::output::{csv_bytes, num};

pub const CSV_HEADER: [&str; 5] = ["n", "k", "l2_norm", "derivative_norm", "barron_lower_bound"];

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleRow {
    pub n: u64,
    pub k: u32,
    pub l2_norm: f64,
    pub derivative_norm: f64,
    pub barron_lower_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleTable {
    pub rows: Vec<CounterexampleRow>,
    /// Rows where `derivative_norm / l2_norm` misses `n^k` by more than `1e-9` relative.
    pub mismatches: Vec<String>,
}

impl CounterexampleTable {
    pub fn csv(&self) -> CliResult<Vec<u8>> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![r.n.to_string(), r.k.to_string(), num(r.l2_norm), num(r.derivative_norm), num(r.barron_lower_bound)]
            })
            .collect();
        csv_bytes(&CSV_HEADER, &rows)
    }
}

/// `cos(n x) / sqrt(pi)` on `[0, 2 pi]`: unit `L^2` norm, `k`-th derivative
/// norm `n^k`, and a weighted Barron norm bounded below by a quantity that
/// diverges with `n`.
pub fn run(p: &CounterexampleParams) -> CliResult<CounterexampleTable> {
    let ns = if p.n.is_empty() { (1..=32).collect() } else { p.n.clone() };
    let ks = if p.k.is_empty() { vec![1, 2, 3] } else { p.k.clone() };
    if ns.iter().any(|&n| n < 1) || ks.iter().any(|&k| k < 1) {
        return Err(CliError::Config("n and k must be at least 1".into()));
    }
    let weight = BarronWeight::new(p.c.unwrap_or(2.0), p.beta.unwrap_or(0.5)).map_err(CliError::config)?;
    let domain = BoxDomain::cube(1, 0.0, 2.0 * PI).map_err(CliError::config)?;
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for &n in &ns {
        let f = SpectralFunction::cosine(domain.clone(), n as f64, 1.0 / PI.sqrt()).map_err(CliError::config)?;
        let l2 = sobolev_norm(&f, 0).map_err(CliError::config)?;
        let bound = counterexample_lower_bound(n, &weight, domain.volume()).map_err(CliError::config)?;
        for &k in &ks {
            let dn = derivative_l2_norm(&f, &MultiIndex(vec![k])).map_err(CliError::config)?;
            let expected = (n as f64).powi(k as i32);
            if ((dn / l2) - expected).abs() > 1e-9 * expected {
                mismatches.push(format!("n={n} k={k}: ratio {} vs {expected}", dn / l2));
            }
            rows.push(CounterexampleRow { n, k, l2_norm: l2, derivative_norm: dn, barron_lower_bound: bound.value });
        }
    }
    Ok(CounterexampleTable { rows, mismatches })
}
