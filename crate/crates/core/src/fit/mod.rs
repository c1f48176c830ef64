//! Greedy constructions of approximants: cosine networks fitted in `H^l`
//! and bandlimited ridge-dictionary fits in the frequency domain.

pub mod bandlimited;
pub mod cosine;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use bandlimited::{
    fit_bandlimited, bandlimited_ladder, parseval_check, BandlimitedConfig, BandlimitedFitter, BandlimitedSamples,
    BandlimitedTarget, ParsevalReport, SpectralSobolevLadder,
};
pub use cosine::{cosine_ladder, fit_cosine, CosineConfig, CosineFitter, CosineNetwork};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    Cosine,
    Bandlimited,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub kind: FitKind,
    /// Requested width.
    pub width: usize,
    /// Atoms actually used; below `width` after an early stop.
    pub atoms: usize,
    /// Residual norm after each greedy step.
    pub residuals: Vec<f64>,
    /// Frequencies (cosine) or `(w, b)` pairs (bandlimited).
    pub parameters: Vec<Vec<f64>>,
    pub target_norm: f64,
    /// Final error in the fitting norm.
    pub error: f64,
    /// Sobolev order of the fitting norm (0 for bandlimited fits).
    pub order: u32,
    /// `M / sum |a_n|` when the coefficient budget forced a rescale.
    pub budget_rescale: Option<f64>,
    pub early_stop: bool,
    pub retries: usize,
    pub seconds: f64,
}

impl FitReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub const CSV_HEADER: [&'static str; 3] = ["N", "error", "seconds"];

    /// `N, error, seconds` in shortest round-trip form.
    pub fn csv_record(&self) -> [String; 3] {
        [self.width.to_string(), format!("{:?}", self.error), format!("{:?}", self.seconds)]
    }
}
