//! Periodic grids, sampled fields and operators diagonal in Fourier space.

mod fft;
mod field;
mod grid;
mod multiplier;
mod uncertainty;

pub use fft::{forward_transform, inverse_transform, FftPlan, Spectrum};
pub use field::{ComplexField, RealField};
pub use grid::{wavenumbers, GridSpec, PhysicalConstants};
pub use multiplier::{apply_multiplier, apply_real, inner_product, norm, sqrt_kg_multiplier, SpectralMultiplier};
pub use uncertainty::{uncertainty_product, Uncertainty, BOUNDARY_MASS_LIMIT, NORMALIZATION_TOLERANCE};

pub(crate) use fft::{forward_with, inverse_with};
pub(crate) use multiplier::split_real;
