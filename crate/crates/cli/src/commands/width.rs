use std::collections::BTreeMap;

use frechet_approx::barron::{barron_norm, BarronWeight};
use frechet_approx::fit::{CosineConfig, CosineFitter};
use frechet_approx::rates::{
    ell_epsilon, fit_rate, width_bandlimited, width_bounded, width_exp_barron, width_monotonic, GrowthSequence,
    RateFamily, RateFunction, WidthResult,
};

use crate::config::{ExperimentConfig, SmoothFunction, Target, TargetSpec, WidthParams};
use crate::error::{CliError, CliResult};

pub const DEFAULT_CALIBRATION_WIDTHS: [usize; 4] = [2, 4, 8, 16];

/// `power:C:r` or `stretched:C:c:gamma`.
pub fn parse_rate(s: &str) -> CliResult<RateFunction> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums: Vec<f64> = parts[1..]
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Config(format!("bad number {p:?} in rate {s:?}"))))
        .collect::<CliResult<_>>()?;
    let rate = match (parts[0], nums.as_slice()) {
        ("power", [c, r]) => RateFunction::power(*c, *r),
        ("stretched" | "stretched_exp", [big_c, c, g]) => RateFunction::stretched_exp(*big_c, *c, *g),
        _ => return Err(CliError::Config(format!("rate must be power:C:r or stretched:C:c:gamma, got {s:?}"))),
    };
    rate.map_err(CliError::config)
}

fn growth(p: &WidthParams) -> CliResult<GrowthSequence> {
    if let Some(values) = &p.growth {
        return Ok(GrowthSequence::Explicit { values: values.clone() });
    }
    if let Some(m) = p.m {
        return Ok(GrowthSequence::Constant { m });
    }
    if let Some(omega) = p.omega {
        return Ok(GrowthSequence::BracketPower { omega });
    }
    Err(CliError::Config("growth needs --m, --growth or --omega".into()))
}

fn need(name: &str, v: Option<f64>) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Config(format!("--{name} is required for this theorem")))
}

pub fn compute(p: &WidthParams, epsilon: f64) -> CliResult<WidthResult> {
    let theorem = p.theorem.as_deref().ok_or_else(|| CliError::Config("--theorem is required".into()))?;
    let rate = || -> CliResult<RateFunction> {
        parse_rate(p.rate.as_deref().ok_or_else(|| CliError::Config("--rate is required for this theorem".into()))?)
    };
    let result = match theorem {
        "monotonic" => {
            let r = rate()?;
            // the same rate at every order
            let rates: BTreeMap<u32, RateFunction> = (0..=64).map(|l| (l, r)).collect();
            width_monotonic(epsilon, need("cf", p.c_f)?, &growth(p)?, &rates)
        }
        "bounded" => width_bounded(epsilon, need("cf", p.c_f)?, &growth(p)?, &rate()?),
        "exp-barron" | "exp_barron" => width_exp_barron(
            epsilon,
            need("norm", p.norm)?,
            need("c-ell", p.c_ell)?,
            need("big-c-ell", p.big_c_ell)?,
            need("beta", p.beta)?,
            p.d.unwrap_or(1),
        ),
        "bandlimited" => width_bandlimited(epsilon, need("norm", p.norm)?, need("omega", p.omega)?),
        other => {
            return Err(CliError::Config(format!(
                "unknown theorem {other:?}; use monotonic, bounded, exp-barron or bandlimited"
            )))
        }
    };
    result.map_err(CliError::config)
}

/// `c_l`, `C_l` and the norm for the exponential Barron formula, estimated
/// from a cosine ladder in `H^l` on the target: fitting
/// `e(N) = K exp(-c N^{beta/d})` gives `c_l = c` and `C_l = K / ||f||`.
/// Only relative: the prediction holds as far as the fitted rate does.
pub struct Calibration {
    pub c_ell: f64,
    pub big_c_ell: f64,
    pub norm: f64,
    pub r_squared: f64,
    pub widths: Vec<usize>,
    pub beta: f64,
    pub d: u32,
}

pub fn calibrate(spec: &TargetSpec, p: &WidthParams, ell: u32) -> CliResult<Calibration> {
    let Target::Smooth { function: SmoothFunction::Profile(profile), domain, beta } = spec.resolve()? else {
        return Err(CliError::Config(format!("{} cannot calibrate the exponential Barron constants", spec.name)));
    };
    let beta = p.beta.unwrap_or(beta);
    let d = domain.dim();
    let norm = match p.norm {
        Some(n) => n,
        None => {
            let w = BarronWeight::new(p.weight_c.unwrap_or(1.0), beta).map_err(CliError::config)?;
            barron_norm(&profile, &w).map_err(CliError::config)?
        }
    };
    let widths = p.calibration_widths.clone().unwrap_or_else(|| DEFAULT_CALIBRATION_WIDTHS.to_vec());
    if widths.len() < 4 || widths[0] < 1 || widths.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config("calibration needs at least 4 strictly increasing widths".into()));
    }
    let mut fitter = CosineFitter::new(&profile, &domain, CosineConfig::with_order(ell)).map_err(CliError::fit)?;
    let mut points = Vec::new();
    for &w in &widths {
        fitter.advance_to(w).map_err(CliError::fit)?;
        let (_, rep) = fitter.snapshot(w).map_err(CliError::fit)?;
        points.push((w as f64, rep.error));
    }
    let fit = fit_rate(&points, RateFamily::StretchedExp { gamma: beta / d as f64 }).map_err(CliError::fit)?;
    let RateFunction::StretchedExp { big_c, c, .. } = fit.rate else { unreachable!() };
    Ok(Calibration { c_ell: c, big_c_ell: big_c / norm, norm, r_squared: fit.r_squared, widths, beta, d: d as u32 })
}

/// One result per epsilon. The exponential Barron formula falls back on
/// calibrated constants when `c_l` or `C_l` is missing and a target is set.
pub fn run(cfg: &ExperimentConfig) -> CliResult<Vec<WidthResult>> {
    if cfg.epsilons.is_empty() {
        return Err(CliError::Config("at least one --epsilon is required".into()));
    }
    let p = &cfg.width;
    let exp_barron = matches!(p.theorem.as_deref(), Some("exp-barron" | "exp_barron"));
    let missing = p.c_ell.is_none() || p.big_c_ell.is_none();
    cfg.epsilons
        .iter()
        .map(|&eps| match (&cfg.target, exp_barron && missing) {
            (Some(spec), true) => {
                let ell = ell_epsilon(eps).map_err(CliError::config)?;
                let cal = calibrate(spec, p, ell)?;
                let mut q = p.clone();
                q.c_ell = Some(p.c_ell.unwrap_or(cal.c_ell));
                q.big_c_ell = Some(p.big_c_ell.unwrap_or(cal.big_c_ell));
                q.norm = Some(cal.norm);
                q.beta = Some(cal.beta);
                q.d = Some(cal.d);
                let mut r = compute(&q, eps)?;
                r.notes.push(format!(
                    "c_l and C_l calibrated in H^{ell} at N = {:?} (R^2 = {:.4}); the width is a prediction, not a guarantee",
                    cal.widths, cal.r_squared
                ));
                Ok(r)
            }
            _ => compute(p, eps),
        })
        .collect()
}
