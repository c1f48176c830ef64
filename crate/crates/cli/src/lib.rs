//! Command-line experiment runner: width calculators, rate studies, Fréchet
//! validation, the oscillating counterexample and plot-script generation.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pool;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use frechet_approx::fit::BandlimitedConfig;
use frechet_approx::rates::RateFamily;
use serde_json::Value;

use crate::config::{ExperimentConfig, TargetSpec};
use crate::error::{CliError, CliResult};
use crate::output::{emit, json_bytes};

#[derive(Debug, Parser)]
#[command(name = "frechet-approx", version, about = "Width formulas, rate studies and Fréchet-metric checks")]
pub struct Cli {
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// One worker thread, fixed reduction order, zero timings.
    #[arg(long, global = true)]
    pub serial: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sufficient width for a target accuracy.
    Width(WidthArgs),
    /// Error against width for a catalog target, with a fitted rate.
    RateStudy(RateStudyArgs),
    /// Checks that the width formula for bandlimited targets delivers the accuracy it promises.
    FrechetValidate(ValidateArgs),
    /// Norms of `cos(n x) / sqrt(pi)` and the divergent Barron lower bound.
    Counterexample(CounterexampleArgs),
    /// Gnuplot script for a rate-study CSV.
    EmitPlots(PlotArgs),
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Catalog name, e.g. raised_cosine, compact_bump, gaussian, gaussian_scale_mixture, atom.
    #[arg(long)]
    pub target: Option<String>,
    /// Target parameter `key=value`; the value is read as JSON when it parses.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
}

#[derive(Debug, Args)]
pub struct WidthArgs {
    /// monotonic, bounded, exp-barron or bandlimited.
    #[arg(long)]
    pub theorem: Option<String>,
    #[arg(long = "epsilon", num_args = 1.., allow_negative_numbers = true)]
    pub epsilons: Vec<f64>,
    #[arg(long = "cf", allow_negative_numbers = true)]
    pub c_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Growth values `M_0,M_1,...`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub growth: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub norm: Option<f64>,
    /// `power:C:r` or `stretched:C:c:gamma`.
    #[arg(long)]
    pub rate: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub c_ell: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub big_c_ell: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub d: Option<u32>,
    /// Target used to calibrate missing exp-barron constants.
    #[command(flatten)]
    pub target: TargetArgs,
    /// Weight constant `c` for the target's Barron norm.
    #[arg(long, allow_negative_numbers = true)]
    pub weight_c: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub calibration_widths: Option<Vec<usize>>,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RateStudyArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, value_delimiter = ',')]
    pub widths: Option<Vec<usize>>,
    /// Sobolev orders of the measured errors.
    #[arg(long, value_delimiter = ',')]
    pub orders: Option<Vec<u32>>,
    /// `power` or `stretched:gamma`.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Also write a gnuplot script for the CSV.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long = "epsilon", num_args = 1.., allow_negative_numbers = true)]
    pub epsilons: Vec<f64>,
    /// Most atoms a single fit may use.
    #[arg(long)]
    pub max_atoms: Option<usize>,
    /// Fréchet truncation level; defaults to `l_eps + 2`.
    #[arg(long)]
    pub truncation_level: Option<u32>,
    /// Candidate grid sizes of the bandlimited fitter.
    #[arg(long)]
    pub w_points: Option<usize>,
    #[arg(long)]
    pub b_points: Option<usize>,
    #[arg(long)]
    pub nodes_per_axis: Option<usize>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Option<Vec<u64>>,
    #[arg(long = "k", value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// CSV written by rate-study.
    pub csv: PathBuf,
    /// Script path; defaults to the CSV path with `.gp` appended.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exponent of the `N^gamma` axis.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
}

fn parse_family(s: &str) -> CliResult<RateFamily> {
    match s.split_once(':') {
        None if s == "power" => Ok(RateFamily::Power),
        Some(("stretched" | "stretched_exp", g)) => g
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|g| *g > 0.0 && g.is_finite())
            .map(|gamma| RateFamily::StretchedExp { gamma })
            .ok_or_else(|| CliError::Config(format!("bad gamma in family {s:?}"))),
        _ => Err(CliError::Config(format!("family must be power or stretched:gamma, got {s:?}"))),
    }
}

fn apply_target(cfg: &mut ExperimentConfig, t: &TargetArgs) -> CliResult<()> {
    if let Some(name) = &t.target {
        if cfg.target.as_ref().map(|s| &s.name) != Some(name) {
            cfg.target = Some(TargetSpec::named(name));
        }
    }
    if t.params.is_empty() {
        return Ok(());
    }
    let spec = cfg.target.as_mut().ok_or_else(|| CliError::Config("--param needs --target".into()))?;
    for p in &t.params {
        let (k, v) = p.split_once('=').ok_or_else(|| CliError::Config(format!("--param expects key=value, got {p:?}")))?;
        let value = serde_json::from_str::<Value>(v).unwrap_or_else(|_| Value::String(v.to_string()));
        spec.params.insert(k.trim().to_string(), value);
    }
    Ok(())
}

fn set<T>(slot: &mut Option<T>, v: &Option<T>)
where
    T: Clone,
{
    if let Some(v) = v {
        *slot = Some(v.clone());
    }
}

/// Parses `args` (program name first) and runs the subcommand, writing
/// reports that have no output path to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            write!(out, "{e}")?;
            return Ok(());
        }
        Err(e) => return Err(CliError::Config(e.to_string())),
    };
    let mut cfg = ExperimentConfig::load_or_default(cli.config.as_deref())?;
    cfg.serial |= cli.serial;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }

    match cli.command {
        Command::Width(a) => {
            let w = &mut cfg.width;
            set(&mut w.theorem, &a.theorem);
            set(&mut w.c_f, &a.c_f);
            set(&mut w.m, &a.m);
            set(&mut w.growth, &a.growth);
            set(&mut w.omega, &a.omega);
            set(&mut w.norm, &a.norm);
            set(&mut w.rate, &a.rate);
            set(&mut w.c_ell, &a.c_ell);
            set(&mut w.big_c_ell, &a.big_c_ell);
            set(&mut w.beta, &a.beta);
            set(&mut w.d, &a.d);
            set(&mut w.weight_c, &a.weight_c);
            set(&mut w.calibration_widths, &a.calibration_widths);
            apply_target(&mut cfg, &a.target)?;
            if !a.epsilons.is_empty() {
                cfg.epsilons = a.epsilons;
            }
            set(&mut cfg.output.json, &a.output);
            let results = commands::width::run(&cfg)?;
            let bytes = if results.len() == 1 { json_bytes(&results[0])? } else { json_bytes(&results)? };
            emit(cfg.output.json.as_deref(), &bytes, out)
        }
        Command::RateStudy(a) => {
            apply_target(&mut cfg, &a.target)?;
            if let Some(w) = a.widths {
                cfg.widths = w;
            }
            if let Some(o) = a.orders {
                cfg.ladder.orders = o;
            }
            if let Some(f) = &a.family {
                cfg.fit.rate_family = Some(parse_family(f)?);
            }
            set(&mut cfg.output.csv, &a.csv);
            set(&mut cfg.output.json, &a.json);
            set(&mut cfg.output.plot, &a.plot);
            let study = commands::rate_study::run(&cfg)?;
            emit(cfg.output.csv.as_deref(), &study.csv()?, out)?;
            if let Some(p) = &cfg.output.json {
                output::write_file(p, &json_bytes(&study.summary)?)?;
            }
            if let Some(p) = &cfg.output.plot {
                let csv = cfg.output.csv.as_deref().ok_or_else(|| CliError::Config("--plot needs --csv".into()))?;
                let gamma = match study.summary.family {
                    RateFamily::StretchedExp { gamma } => Some(gamma),
                    RateFamily::Power => None,
                };
                commands::plots::run(csv, Some(p), gamma)?;
            }
            Ok(())
        }
        Command::FrechetValidate(a) => {
            apply_target(&mut cfg, &a.target)?;
            if !a.epsilons.is_empty() {
                cfg.epsilons = a.epsilons;
            }
            set(&mut cfg.fit.max_atoms, &a.max_atoms);
            set(&mut cfg.ladder.truncation_level, &a.truncation_level);
            if a.w_points.is_some() || a.b_points.is_some() || a.nodes_per_axis.is_some() {
                let d = match &cfg.target {
                    Some(spec) => spec.resolve()?.dim(),
                    None => 1,
                };
                let mut fit = cfg.fit.bandlimited.clone().unwrap_or_else(|| BandlimitedConfig::for_dim(d));
                fit.w_points = a.w_points.unwrap_or(fit.w_points);
                fit.b_points = a.b_points.unwrap_or(fit.b_points);
                fit.nodes_per_axis = a.nodes_per_axis.unwrap_or(fit.nodes_per_axis);
                cfg.fit.bandlimited = Some(fit);
            }
            set(&mut cfg.output.json, &a.json);
            let report = commands::validate::run(&cfg)?;
            emit(cfg.output.json.as_deref(), &json_bytes(&report)?, out)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::Validation(report.failure_text()))
            }
        }
        Command::Counterexample(a) => {
            let c = &mut cfg.counterexample;
            if let Some(n) = a.n {
                c.n = n;
            }
            if let Some(k) = a.k {
                c.k = k;
            }
            set(&mut c.c, &a.c);
            set(&mut c.beta, &a.beta);
            set(&mut cfg.output.csv, &a.csv);
            let table = commands::counterexample::run(&cfg.counterexample)?;
            emit(cfg.output.csv.as_deref(), &table.csv()?, out)?;
            if table.mismatches.is_empty() {
                Ok(())
            } else {
                Err(CliError::Validation(table.mismatches.join("\n")))
            }
        }
        Command::EmitPlots(a) => {
            let script = commands::plots::run(&a.csv, a.output.as_deref(), a.gamma)?;
            writeln!(out, "{}", script.display())?;
            Ok(())
        }
    }
}
