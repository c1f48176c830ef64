//! Fourier multipliers `Op[m] u = F^{-1}(m u^)` on periodic grids.

use num_complex::Complex64;

use crate::barron::profile::FourierProfile;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::spectral::SpectralFunction;

/// A function of the frequency variable.
pub trait Symbol: Sync {
    fn dim(&self) -> usize;
    fn symbol(&self, xi: &[f64]) -> Complex64;
}

impl Symbol for SpectralFunction {
    fn dim(&self) -> usize {
        SpectralFunction::dim(self)
    }

    /// The atom sum evaluated at `xi`, ignoring the spatial box.
    fn symbol(&self, xi: &[f64]) -> Complex64 {
        self.atoms()
            .iter()
            .map(|a| {
                let phase: f64 = a.frequency.iter().zip(xi).map(|(t, v)| t * v).sum();
                a.amplitude * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }
}

impl Symbol for FourierProfile {
    fn dim(&self) -> usize {
        FourierProfile::dim(self)
    }

    fn symbol(&self, xi: &[f64]) -> Complex64 {
        self.value(xi)
    }
}

/// Wraps a closure as a [`Symbol`].
pub struct FnSymbol<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> Complex64 + Sync> Symbol for FnSymbol<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn symbol(&self, xi: &[f64]) -> Complex64 {
        (self.f)(xi)
    }
}

/// Transforms `u`, multiplies by the symbol at the signed grid frequencies
/// `2 pi k / L`, and transforms back.
pub fn apply_multiplier<S: Symbol + ?Sized>(symbol: &S, u: &GridFunction) -> Result<GridFunction> {
    if symbol.dim() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: symbol.dim() });
    }
    Ok(u.apply_multiplier(|xi| symbol.symbol(xi)))
}
