//! Experiment configuration files and the target catalog.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use frechet_approx::barron::FourierProfile;
use frechet_approx::fit::{BandlimitedConfig, BandlimitedTarget, CosineConfig};
use frechet_approx::rates::RateFamily;
use frechet_approx::{BoxDomain, Differentiable, SpectralFunction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Width,
    RateStudy,
    FrechetValidate,
    Counterexample,
    EmitPlots,
}

/// Everything a run depends on. Command-line flags override fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    #[serde(default)]
    pub target: Option<TargetSpec>,
    #[serde(default)]
    pub ladder: LadderConfig,
    #[serde(default)]
    pub widths: Vec<usize>,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    /// Echoed into reports; every fitter here is deterministic.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub serial: bool,
    #[serde(default)]
    pub output: OutputPaths,
    #[serde(default)]
    pub width: WidthParams,
    #[serde(default)]
    pub counterexample: CounterexampleParams,
    #[serde(default)]
    pub fit: FitParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: None,
            target: None,
            ladder: LadderConfig::default(),
            widths: Vec::new(),
            epsilons: Vec::new(),
            seed: 0,
            serial: false,
            output: OutputPaths::default(),
            width: WidthParams::default(),
            counterexample: CounterexampleParams::default(),
            fit: FitParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load_or_default(path: Option<&Path>) -> CliResult<Self> {
        path.map(ExperimentConfig::load).unwrap_or_else(|| Ok(ExperimentConfig::default()))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LadderConfig {
    /// Seminorm orders measured by a rate study.
    pub orders: Vec<u32>,
    /// Fréchet truncation level; `None` uses `l_eps + 2`.
    pub truncation_level: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WidthParams {
    /// `monotonic`, `bounded`, `exp-barron` or `bandlimited`.
    pub theorem: Option<String>,
    pub c_f: Option<f64>,
    /// Constant growth `M_l = m`.
    pub m: Option<f64>,
    /// Explicit growth values `M_0, M_1, ...`.
    pub growth: Option<Vec<f64>>,
    pub omega: Option<f64>,
    pub norm: Option<f64>,
    /// `power:C:r` or `stretched:C:c:gamma`.
    pub rate: Option<String>,
    pub c_ell: Option<f64>,
    pub big_c_ell: Option<f64>,
    pub beta: Option<f64>,
    pub d: Option<u32>,
    /// Weight constant `c` in `e^{c |xi|^beta}` when the norm is computed
    /// from the configured target.
    pub weight_c: Option<f64>,
    /// Widths of the cosine ladder used to calibrate `c_l` and `C_l`.
    pub calibration_widths: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleParams {
    pub n: Vec<u64>,
    pub k: Vec<u32>,
    pub c: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitParams {
    /// Upper limit on the atoms a single fit may use.
    pub max_atoms: Option<usize>,
    pub cosine: Option<CosineConfig>,
    pub bandlimited: Option<BandlimitedConfig>,
    pub rate_family: Option<RateFamily>,
}

/// A catalog entry: `name` plus free-form numeric parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub name: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl TargetSpec {
    pub fn named(name: &str) -> Self {
        TargetSpec { name: name.to_string(), params: Map::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    fn num(&self, key: &str, default: f64) -> CliResult<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| CliError::Config(format!("target parameter {key} must be a number"))),
        }
    }

    fn count(&self, key: &str, default: usize) -> CliResult<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| CliError::Config(format!("target parameter {key} must be a non-negative integer"))),
        }
    }

    fn list(&self, key: &str, default: Vec<f64>) -> CliResult<Vec<f64>> {
        match self.params.get(key) {
            None => Ok(default),
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| CliError::Config(format!("{key} must hold numbers"))))
                .collect(),
            Some(v) => v
                .as_f64()
                .map(|x| vec![x])
                .ok_or_else(|| CliError::Config(format!("target parameter {key} must be a number or list"))),
        }
    }

    fn spatial_box(&self, d: usize) -> CliResult<BoxDomain> {
        let lo = self.num("lower", 0.0)?;
        let hi = self.num("upper", 1.0)?;
        BoxDomain::cube(d, lo, hi).map_err(CliError::config)
    }

    pub fn resolve(&self) -> CliResult<Target> {
        let d = self.count("d", 1)?;
        if d == 0 {
            return Err(CliError::Config("dimension must be positive".into()));
        }
        let bandlimited = |p: FourierProfile, omega: f64| -> CliResult<Target> {
            Ok(Target::Bandlimited(BandlimitedTarget::new(p, omega).map_err(CliError::config)?))
        };
        match self.name.as_str() {
            "raised_cosine" => {
                let omega = self.num("omega", PI)?;
                let p = FourierProfile::raised_cosine(omega, d).scaled(self.num("amplitude", 1.0)?);
                bandlimited(p, omega)
            }
            "compact_bump" => {
                let omega = self.num("omega", PI)?;
                let p = FourierProfile::compact_bump(omega, d).scaled(self.num("amplitude", 1.0)?);
                bandlimited(p, omega)
            }
            "gaussian" => {
                let a = self.num("a", 1.0)?;
                let center = self.list("center", vec![0.5; d])?;
                if center.len() != d || !(a > 0.0) {
                    return Err(CliError::Config("gaussian needs a > 0 and a centre of length d".into()));
                }
                let p = FourierProfile::Gaussian {
                    terms: vec![frechet_approx::barron::GaussianTerm { weight: 1.0, a, center }],
                };
                Ok(Target::Smooth { function: SmoothFunction::Profile(p), domain: self.spatial_box(d)?, beta: self.num("beta", 0.5)? })
            }
            "gaussian_scale_mixture" => {
                let center = self.list("center", vec![0.5; d])?;
                let decay = self.num("decay", 2.0)?;
                let levels = self.count("levels", 8)? as u32;
                if !(decay > 0.0) || levels == 0 {
                    return Err(CliError::Config("scale mixture needs decay > 0 and levels >= 1".into()));
                }
                let p = FourierProfile::gaussian_scale_mixture(decay, levels, center.clone());
                let domain = self.spatial_box(center.len())?;
                Ok(Target::Smooth { function: SmoothFunction::Profile(p), domain, beta: self.num("beta", 0.5)? })
            }
            "atom" => {
                let frequency = self.list("frequency", vec![6.0 * PI; d])?;
                let amp = Complex64::new(self.num("re", 1.0)?, self.num("im", 0.0)?);
                let domain = self.spatial_box(frequency.len())?;
                let f = SpectralFunction::single(domain.clone(), amp, frequency).map_err(CliError::config)?;
                Ok(Target::Smooth { function: SmoothFunction::Atoms(f), domain, beta: self.num("beta", 0.5)? })
            }
            other => Err(CliError::Config(format!(
                "unknown target {other:?}; known: raised_cosine, compact_bump, gaussian, gaussian_scale_mixture, atom"
            ))),
        }
    }
}

pub enum SmoothFunction {
    Profile(FourierProfile),
    Atoms(SpectralFunction),
}

impl SmoothFunction {
    pub fn as_dyn(&self) -> &dyn Differentiable {
        match self {
            SmoothFunction::Profile(p) => p,
            SmoothFunction::Atoms(f) => f,
        }
    }
}

/// A resolved catalog target together with the fitter that handles it.
pub enum Target {
    /// Fitted in the frequency domain by the ridge dictionary.
    Bandlimited(BandlimitedTarget),
    /// Fitted on a box by cosine networks. `beta` sets the default
    /// stretched-exponential exponent `beta / d`.
    Smooth { function: SmoothFunction, domain: BoxDomain, beta: f64 },
}

impl Target {
    pub fn dim(&self) -> usize {
        match self {
            Target::Bandlimited(t) => t.dim(),
            Target::Smooth { domain, .. } => domain.dim(),
        }
    }

    pub fn default_family(&self) -> RateFamily {
        match self {
            Target::Bandlimited(_) => RateFamily::Power,
            Target::Smooth { beta, domain, .. } => RateFamily::StretchedExp { gamma: beta / domain.dim() as f64 },
        }
    }
}
