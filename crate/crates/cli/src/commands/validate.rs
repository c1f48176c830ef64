use std::f64::consts::PI;

use frechet_approx::barron::barron_bl_norm;
use frechet_approx::fit::{fit_bandlimited, BandlimitedConfig, BandlimitedSamples, SpectralSobolevLadder};
use frechet_approx::frechet::{FrechetMetric, MetricOperand};
use frechet_approx::rates::width_bandlimited;
use frechet_approx::seminorms::SeminormSequence;
use serde::Serialize;

use crate::config::{ExperimentConfig, Target, TargetSpec, SCHEMA_VERSION};
use crate::error::{CliError, CliResult};
use crate::pool::run_in_pool;

pub const DEFAULT_EPSILONS: [f64; 3] = [0.5, 0.25, 0.125];
pub const DEFAULT_MAX_ATOMS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonCheck {
    pub epsilon: f64,
    pub ell_epsilon: u32,
    /// Width the formula asks for.
    pub n_sufficient: u64,
    pub n_saturated: bool,
    /// Width actually requested from the fitter.
    pub n_used: usize,
    pub capped: bool,
    pub atoms: usize,
    pub early_stop: bool,
    pub truncation_level: u32,
    /// Residual seminorms `p_0, ..., p_L`.
    pub seminorms: Vec<f64>,
    pub value: f64,
    pub tail_bound: f64,
    pub total: f64,
    /// `epsilon - (value + tail_bound)`.
    pub margin: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    pub experiment: &'static str,
    pub target: TargetSpec,
    pub omega: f64,
    pub barron_bl_norm: f64,
    pub max_atoms: usize,
    pub seed: u64,
    pub serial: bool,
    pub checks: Vec<EpsilonCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub pass: bool,
}

impl ValidationReport {
    /// Diagnostics of the failed checks, one per line.
    pub fn failure_text(&self) -> String {
        self.checks.iter().filter_map(|c| c.diagnostic.clone()).collect::<Vec<_>>().join("\n")
    }
}

pub fn default_target() -> TargetSpec {
    TargetSpec::named("raised_cosine").with("omega", PI).with("d", 1)
}

/// Width from the bandlimited formula, a capped fit at that width, and the
/// truncated Fréchet distance of the residual at `L = l_eps + 2`.
pub fn run(cfg: &ExperimentConfig) -> CliResult<ValidationReport> {
    let spec = cfg.target.clone().unwrap_or_else(default_target);
    let target = match spec.resolve()? {
        Target::Bandlimited(t) => t,
        Target::Smooth { .. } => {
            return Err(CliError::Config(format!("{} is not a bandlimited target", spec.name)));
        }
    };
    let epsilons = if cfg.epsilons.is_empty() { DEFAULT_EPSILONS.to_vec() } else { cfg.epsilons.clone() };
    let max_atoms = cfg.fit.max_atoms.unwrap_or(DEFAULT_MAX_ATOMS);
    if max_atoms < 1 {
        return Err(CliError::Config("max_atoms must be at least 1".into()));
    }
    let fit_cfg = cfg.fit.bandlimited.clone().unwrap_or_else(|| BandlimitedConfig::for_dim(target.dim()));
    let mut notes = Vec::new();
    if target.dim() > 1 {
        notes.push("growth constants <Omega>^l bound the seminorm ladder only in one dimension".to_string());
    }

    run_in_pool(cfg.serial, || -> CliResult<ValidationReport> {
        let norm = barron_bl_norm(&target.profile).map_err(CliError::config)?;
        let reference = BandlimitedSamples::from_profile_default(&target.profile, target.omega).map_err(CliError::config)?;
        let mut checks = Vec::new();
        for &epsilon in &epsilons {
            let width = width_bandlimited(epsilon, norm, target.omega).map_err(CliError::config)?;
            let capped = width.saturated || width.n_sufficient > max_atoms as u64;
            let n_used = if capped { max_atoms } else { width.n_sufficient as usize };
            let (approx, rep) = fit_bandlimited(&target, n_used, &fit_cfg).map_err(CliError::fit)?;
            let level = cfg.ladder.truncation_level.unwrap_or(width.ell_epsilon + 2);
            let metric = FrechetMetric::new(SpectralSobolevLadder, level).map_err(CliError::config)?;
            let fitted = BandlimitedSamples::from_profile_default(&approx, target.omega).map_err(CliError::fit)?;
            let residual = reference.difference(&fitted).map_err(CliError::fit)?;
            let seminorms = SpectralSobolevLadder.seminorms_upto(&residual, level).map_err(CliError::fit)?;
            let d = metric.norm(&residual).map_err(CliError::fit)?;
            let total = d.value + d.tail_bound;
            let pass = total < epsilon;
            let diagnostic = (!pass).then(|| {
                let why = if capped || rep.early_stop {
                    format!(
                        "fitter-limited: the formula asks for N={}{}, the fitter used {} atoms (cap {max_atoms}{})",
                        width.n_sufficient,
                        if width.saturated { " (saturated)" } else { "" },
                        rep.atoms,
                        if rep.early_stop { ", stopped early" } else { "" }
                    )
                } else {
                    format!("bound violated at the full width N={}", width.n_sufficient)
                };
                format!(
                    "epsilon={epsilon}: distance {:e} + tail {:e} = {:e} is not below epsilon; {why}; residual L2 {:e}",
                    d.value, d.tail_bound, total, rep.error
                )
            });
            checks.push(EpsilonCheck {
                epsilon,
                ell_epsilon: width.ell_epsilon,
                n_sufficient: width.n_sufficient,
                n_saturated: width.saturated,
                n_used,
                capped,
                atoms: rep.atoms,
                early_stop: rep.early_stop,
                truncation_level: level,
                seminorms,
                value: d.value,
                tail_bound: d.tail_bound,
                total,
                margin: epsilon - total,
                pass,
                diagnostic,
            });
        }
        let pass = checks.iter().all(|c| c.pass);
        Ok(ValidationReport {
            schema_version: SCHEMA_VERSION,
            experiment: "frechet_validate",
            target: spec.clone(),
            omega: target.omega,
            barron_bl_norm: norm,
            max_atoms,
            seed: cfg.seed,
            serial: cfg.serial,
            checks,
            notes,
            pass,
        })
    })?
}
