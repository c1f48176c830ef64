use frechet_approx::fit::{BandlimitedConfig, BandlimitedFitter, BandlimitedSamples, CosineConfig, CosineFitter};
use frechet_approx::frechet::MetricOperand;
use frechet_approx::rates::{fit_rate, FittedRate, RateFamily};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, Target, TargetSpec, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::{csv_bytes, num};
use crate::pool::{run_in_pool, thread_count};

pub const CSV_HEADER: [&str; 4] = ["N", "order", "error", "seconds"];

/// Relative error at which a ladder stops early: the target is already
/// represented.
pub const SHORT_CIRCUIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub n: usize,
    pub order: u32,
    pub error: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderSummary {
    pub order: u32,
    pub points: Vec<(usize, f64)>,
    pub fit: Option<FittedRate>,
    /// The ladder stopped once the error fell below `1e-8` of the target norm.
    pub short_circuit: bool,
    /// The fitter ran out of useful atoms before the largest width.
    pub early_stop: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateStudySummary {
    pub schema_version: u32,
    pub experiment: &'static str,
    pub target: TargetSpec,
    pub fitter: &'static str,
    pub family: RateFamily,
    pub widths: Vec<usize>,
    pub seed: u64,
    pub serial: bool,
    pub orders: Vec<OrderSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateStudy {
    pub rows: Vec<Row>,
    pub summary: RateStudySummary,
}

impl RateStudy {
    pub fn csv(&self) -> CliResult<Vec<u8>> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| vec![r.n.to_string(), r.order.to_string(), num(r.error), num(r.seconds)])
            .collect();
        csv_bytes(&CSV_HEADER, &rows)
    }
}

fn check_widths(widths: &[usize]) -> CliResult<()> {
    if widths.len() < 4 {
        return Err(CliError::Config(format!("a rate study needs at least 4 widths, got {}", widths.len())));
    }
    if widths[0] < 1 || widths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config("widths must be positive and strictly increasing".into()));
    }
    Ok(())
}

struct Ladder {
    points: Vec<(usize, f64, f64)>,
    short_circuit: bool,
    early_stop: bool,
}

fn cosine_ladder(
    target: &Target,
    order: u32,
    widths: &[usize],
    base: &Option<CosineConfig>,
) -> CliResult<Ladder> {
    let Target::Smooth { function, domain, .. } = target else { unreachable!() };
    let config = CosineConfig { order, ..base.clone().unwrap_or_default() };
    let mut fitter = CosineFitter::new(function.as_dyn(), domain, config).map_err(CliError::fit)?;
    let mut out = Ladder { points: Vec::new(), short_circuit: false, early_stop: false };
    for &w in widths {
        fitter.advance_to(w).map_err(CliError::fit)?;
        let (_, rep) = fitter.snapshot(w).map_err(CliError::fit)?;
        out.points.push((w, rep.error, rep.seconds));
        out.early_stop |= rep.early_stop;
        if rep.error <= SHORT_CIRCUIT * rep.target_norm {
            out.short_circuit = true;
            break;
        }
    }
    Ok(out)
}

fn bandlimited_ladder(
    target: &Target,
    order: u32,
    widths: &[usize],
    base: &Option<BandlimitedConfig>,
) -> CliResult<Ladder> {
    let Target::Bandlimited(t) = target else { unreachable!() };
    let config = base.clone().unwrap_or_else(|| BandlimitedConfig::for_dim(t.dim()));
    let mut fitter = BandlimitedFitter::new(t, config).map_err(CliError::fit)?;
    let reference = if order > 0 {
        Some(BandlimitedSamples::from_profile_default(&t.profile, t.omega).map_err(CliError::fit)?)
    } else {
        None
    };
    let mut out = Ladder { points: Vec::new(), short_circuit: false, early_stop: false };
    for &w in widths {
        fitter.advance_to(w);
        let (approx, rep) = fitter.snapshot(w);
        let error = match &reference {
            None => rep.error,
            Some(r) => {
                let a = BandlimitedSamples::from_profile_default(&approx, t.omega).map_err(CliError::fit)?;
                r.difference(&a).map_err(CliError::fit)?.weighted_l2(order)
            }
        };
        out.points.push((w, error, rep.seconds));
        out.early_stop |= rep.early_stop;
        if rep.error <= SHORT_CIRCUIT * rep.target_norm {
            out.short_circuit = true;
            break;
        }
    }
    Ok(out)
}

fn summarise(order: u32, ladder: &Ladder, family: RateFamily) -> OrderSummary {
    let points: Vec<(usize, f64)> = ladder.points.iter().map(|p| (p.0, p.1)).collect();
    let data: Vec<(f64, f64)> = points.iter().map(|&(n, e)| (n as f64, e)).collect();
    let (fit, note) = match fit_rate(&data, family) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(format!("no rate fitted: {e}"))),
    };
    OrderSummary { order, points, fit, short_circuit: ladder.short_circuit, early_stop: ladder.early_stop, note }
}

/// Runs one warm-started ladder per order on the work pool, then sorts
/// the rows by `(order, N)`.
pub fn run(cfg: &ExperimentConfig) -> CliResult<RateStudy> {
    let spec = cfg.target.clone().ok_or_else(|| CliError::Config("rate study needs a target".into()))?;
    let target = spec.resolve()?;
    check_widths(&cfg.widths)?;
    let mut orders = if cfg.ladder.orders.is_empty() { vec![0] } else { cfg.ladder.orders.clone() };
    orders.sort_unstable();
    orders.dedup();
    let family = cfg.fit.rate_family.unwrap_or_else(|| target.default_family());
    let fitter = match target {
        Target::Bandlimited(_) => "bandlimited",
        Target::Smooth { .. } => "cosine",
    };
    thread_count(cfg.serial)?;
    let ladders: Vec<CliResult<Ladder>> = run_in_pool(cfg.serial, || {
        orders
            .par_iter()
            .map(|&order| match target {
                Target::Bandlimited(_) => bandlimited_ladder(&target, order, &cfg.widths, &cfg.fit.bandlimited),
                Target::Smooth { .. } => cosine_ladder(&target, order, &cfg.widths, &cfg.fit.cosine),
            })
            .collect()
    })?;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (&order, ladder) in orders.iter().zip(ladders) {
        let ladder = ladder?;
        for &(n, error, seconds) in &ladder.points {
            rows.push(Row { n, order, error, seconds: if cfg.serial { 0.0 } else { seconds } });
        }
        summaries.push(summarise(order, &ladder, family));
    }
    rows.sort_by(|a, b| (a.order, a.n).cmp(&(b.order, b.n)));
    let summary = RateStudySummary {
        schema_version: SCHEMA_VERSION,
        experiment: "rate_study",
        target: spec,
        fitter,
        family,
        widths: cfg.widths.clone(),
        seed: cfg.seed,
        serial: cfg.serial,
        orders: summaries,
    };
    Ok(RateStudy { rows, summary })
}
