use num_complex::Complex64;

use super::{forward_transform, ComplexField, PhysicalConstants};
use crate::{Error, Result};

/// Largest probability allowed within `L/8` of the chart boundary.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-6;

/// Allowed deviation of `<f, f>` from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty {
    pub delta_x: f64,
    pub delta_p: f64,
    /// `hbar / 2`.
    pub bound: f64,
}

impl Uncertainty {
    pub fn product(&self) -> f64 {
        self.delta_x * self.delta_p
    }

    /// `delta_x * delta_p >= bound * (1 - rel_slack)`.
    pub fn satisfies(&self, rel_slack: f64) -> bool {
        self.product() >= self.bound * (1.0 - rel_slack)
    }
}

/// Position and momentum standard deviations of a normalized, localized
/// state, together with the Robertson bound `hbar / 2`.
///
/// The position variance is taken in the flat chart `[0, L)` after rolling
/// the field so its circular mean sits at `L/2`. States with more than
/// [`BOUNDARY_MASS_LIMIT`] of probability within `L/8` of the chart edges are
/// rejected. The momentum variance is spectral, using `hbar k` with the
/// Nyquist mode zeroed.
pub fn uncertainty_product(f: &ComplexField, constants: &PhysicalConstants) -> Result<Uncertainty> {
    let grid = *f.grid();
    let n = grid.n();
    let dx = grid.spacing();
    let length = grid.length();

    let rho: alloc::vec::Vec<f64> = f.values().iter().map(|z| z.norm_sqr() * dx).collect();
    let total: f64 = rho.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq: total });
    }

    let phasor: Complex64 = rho
        .iter()
        .enumerate()
        .map(|(j, &r)| Complex64::from_polar(r, core::f64::consts::TAU * j as f64 / n as f64))
        .sum();
    let mut angle = phasor.arg();
    if angle < 0.0 {
        angle += core::f64::consts::TAU;
    }
    let mean_slot = angle / core::f64::consts::TAU * n as f64;
    let shift = ((n / 2) as f64 - mean_slot).round() as i64;
    let rolled = |j: usize| rho[(j as i64 - shift).rem_euclid(n as i64) as usize];

    let margin = length / 8.0;
    let boundary_mass: f64 = (0..n)
        .filter(|&j| {
            let x = grid.position(j);
            x < margin || x > length - margin
        })
        .map(rolled)
        .sum();
    if boundary_mass > BOUNDARY_MASS_LIMIT {
        return Err(Error::NotLocalized { boundary_mass });
    }

    let mean_x: f64 = (0..n).map(|j| grid.position(j) * rolled(j)).sum::<f64>() / total;
    let var_x: f64 = (0..n)
        .map(|j| {
            let d = grid.position(j) - mean_x;
            d * d * rolled(j)
        })
        .sum::<f64>()
        / total;

    let spectrum = forward_transform(f);
    let weights: alloc::vec::Vec<f64> = spectrum.coeffs().iter().map(|c| c.norm_sqr()).collect();
    let weight_total: f64 = weights.iter().sum();
    let nyquist = grid.nyquist_slot();
    let p = |slot: usize| {
        if slot == nyquist {
            0.0
        } else {
            constants.hbar() * grid.wavenumber(slot)
        }
    };
    let mean_p: f64 = weights.iter().enumerate().map(|(s, w)| p(s) * w).sum::<f64>() / weight_total;
    let var_p: f64 = weights
        .iter()
        .enumerate()
        .map(|(s, w)| {
            let d = p(s) - mean_p;
            d * d * w
        })
        .sum::<f64>()
        / weight_total;

    Ok(Uncertainty {
        delta_x: var_x.sqrt(),
        delta_p: var_p.sqrt(),
        bound: constants.hbar() / 2.0,
    })
}
