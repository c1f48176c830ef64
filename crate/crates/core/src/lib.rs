//! Fréchet-metric approximation toolkit: spectral and grid function
//! representations, Sobolev and symbol seminorms, Fréchet metrics,
//! sufficient-width formulas, Barron-type norms and greedy cosine fitting.

pub mod barron;
pub mod domain;
pub mod error;
pub mod fit;
pub mod frechet;
pub mod gevrey;
pub mod grid;
pub mod numeric;
pub mod rates;
pub mod seminorms;
pub mod spectral;

pub use domain::{BoxDomain, MultiIndex};
pub use error::{Error, Result};
pub use grid::GridFunction;
pub use numeric::japanese_bracket;
pub use spectral::{Atom, Differentiable, SpectralFunction};
