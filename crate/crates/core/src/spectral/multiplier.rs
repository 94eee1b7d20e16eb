use alloc::string::String;
use alloc::vec::Vec;
use alloc::sync::Arc;
use core::fmt;
use num_complex::Complex64;

use super::fft::{forward_with, inverse_with, FftPlan};
use super::{ComplexField, PhysicalConstants, RealField};
use crate::{Error, Result};

type Evaluator = dyn Fn(f64) -> Complex64 + Send + Sync;

/// An operator diagonal in the Fourier basis, `f(k) * f_hat(k)`.
///
/// Odd multipliers (odd powers of `k`) have no consistent value on the
/// unpaired `-n/2` mode; they are flagged so that mode is zeroed, which keeps
/// the operator hermitian when its symbol is real.
#[derive(Clone)]
pub struct SpectralMultiplier {
    label: String,
    evaluator: Arc<Evaluator>,
    zero_nyquist: bool,
}

impl fmt::Debug for SpectralMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralMultiplier")
            .field("label", &self.label)
            .field("zero_nyquist", &self.zero_nyquist)
            .finish()
    }
}

impl SpectralMultiplier {
    pub fn new(label: impl Into<String>, evaluator: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            evaluator: Arc::new(evaluator),
            zero_nyquist: false,
        }
    }

    pub fn real(label: impl Into<String>, evaluator: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(label, move |k| Complex64::new(evaluator(k), 0.0))
    }

    /// Marks the multiplier as odd in `k`; the Nyquist mode is set to zero.
    pub fn odd(mut self) -> Self {
        self.zero_nyquist = true;
        self
    }

    pub fn identity() -> Self {
        Self::real("identity", |_| 1.0)
    }

    /// Symbol `-k^2` of the Laplacian.
    pub fn laplacian() -> Self {
        Self::real("laplacian", |k| -k * k)
    }

    /// Symbol `i k` of `d/dx`.
    pub fn derivative() -> Self {
        Self::new("d/dx", |k| Complex64::new(0.0, k)).odd()
    }

    /// Symbol `hbar k` of the momentum operator `-i hbar d/dx`.
    pub fn momentum(hbar: f64) -> Self {
        Self::real("momentum", move |k| hbar * k).odd()
    }

    /// `sqrt(mu^2 + k^2)`, the symbol of `sqrt(mu^2 - Laplacian)`.
    pub fn sqrt_kg(mu: f64) -> Self {
        Self::real("sqrt(mu^2 - laplacian)", move |k| mu.hypot(k))
    }

    /// Pointwise product `self(k) * other(k)`.
    pub fn compose(&self, other: &Self) -> Self {
        let a = Arc::clone(&self.evaluator);
        let b = Arc::clone(&other.evaluator);
        Self {
            label: alloc::format!("{} * {}", self.label, other.label),
            evaluator: Arc::new(move |k| a(k) * b(k)),
            zero_nyquist: self.zero_nyquist || other.zero_nyquist,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn zeroes_nyquist(&self) -> bool {
        self.zero_nyquist
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        (self.evaluator)(k)
    }

    /// The symbol sampled at every slot of `grid`, with the Nyquist rule
    /// applied.
    pub fn symbols(&self, grid: &super::GridSpec) -> Vec<Complex64> {
        let mut out: Vec<Complex64> =
            grid.wavenumbers().into_iter().map(|k| self.eval(k)).collect();
        if self.zero_nyquist {
            out[grid.nyquist_slot()] = Complex64::new(0.0, 0.0);
        }
        out
    }
}

/// `sqrt(mu^2 + k^2)` with `mu = mass * c / hbar`.
pub fn sqrt_kg_multiplier(constants: &PhysicalConstants) -> SpectralMultiplier {
    SpectralMultiplier::sqrt_kg(constants.mu())
}

/// `inverse_transform(m(k) * forward_transform(f))`.
pub fn apply_multiplier(f: &ComplexField, m: &SpectralMultiplier) -> ComplexField {
    apply_with(&FftPlan::for_grid(f.grid()), f, m)
}

pub(crate) fn apply_with(plan: &FftPlan, f: &ComplexField, m: &SpectralMultiplier) -> ComplexField {
    let mut s = forward_with(plan, f);
    for (c, sym) in s.coeffs_mut().iter_mut().zip(m.symbols(f.grid())) {
        *c *= sym;
    }
    inverse_with(plan, &s)
}

/// Applies a multiplier to a real field and drops the imaginary residue.
///
/// Returns the real result and the largest discarded imaginary part, which is
/// round-off when the symbol is real and even in `k`.
pub fn apply_real(f: &RealField, m: &SpectralMultiplier) -> (RealField, f64) {
    let out = apply_multiplier(&f.to_complex(), m);
    split_real(out)
}

pub(crate) fn split_real(f: ComplexField) -> (RealField, f64) {
    let residue = f.values().iter().fold(0.0f64, |r, z| r.max(z.im.abs()));
    (f.real_part(), residue)
}

/// `sum_j conj(f_j) g_j dx`.
pub fn inner_product(f: &ComplexField, g: &ComplexField) -> Result<Complex64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let dx = f.grid().spacing();
    Ok(f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        * dx)
}

/// `sqrt(<f, f>)`.
pub fn norm(f: &ComplexField) -> f64 {
    (f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * f.grid().spacing()).sqrt()
}
