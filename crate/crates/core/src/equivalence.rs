//! Maps between a real Klein-Gordon field `phi` and a complex wave function
//! obeying the free square-root equation `i psi_t / c = sqrt(mu^2 - Laplacian) psi`.
//!
//! Forward: `psi = -sqrt(mu^2 - Laplacian) phi - i phi_t / c`.
//! Backward: `phi(t) = k(x) - c int_0^t Im psi(s) ds`, where `k` solves
//! `sqrt(mu^2 - Laplacian) k = -Re psi(0)`.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::evolution::{
    density_parts, dispersion, energy_density, evolve_klein_gordon, sqrt_propagate, EvolutionParams,
    KleinGordonState,
};
use crate::spectral::{
    apply_real, forward_with, inverse_with, split_real, ComplexField, FftPlan, PhysicalConstants, RealField,
    SpectralMultiplier,
};
use crate::{Error, Result};

/// Measured residuals of the field/wave-function equivalence. All are
/// relative except `density_residual`, which is an absolute pointwise
/// maximum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EquivalenceReport {
    /// Forward map of the evolved field against the square-root equation and
    /// against the exactly propagated wave function.
    pub schrodinger_residual: f64,
    /// Backward map against the Klein-Gordon equation and against the
    /// directly evolved field.
    pub kg_residual: f64,
    /// `psi -> phi -> psi` against the propagated wave function.
    pub roundtrip_residual: f64,
    /// `max |(|psi|^2) - density_from_phi|`.
    pub density_residual: f64,
}

impl EquivalenceReport {
    pub fn max(&self) -> f64 {
        self.schrodinger_residual
            .max(self.kg_residual)
            .max(self.roundtrip_residual)
            .max(self.density_residual)
    }

    pub fn entries(&self) -> [(&'static str, f64); 4] {
        [
            ("schrodinger_residual", self.schrodinger_residual),
            ("kg_residual", self.kg_residual),
            ("roundtrip_residual", self.roundtrip_residual),
            ("density_residual", self.density_residual),
        ]
    }
}

/// `psi = -sqrt(mu^2 - Laplacian) phi - i phi_dot / c`.
pub fn psi_from_phi(state: &KleinGordonState, constants: &PhysicalConstants) -> ComplexField {
    let (time_part, space_part) = density_parts(state, constants);
    let values = space_part
        .values()
        .iter()
        .zip(time_part.values())
        .map(|(&s, &t)| Complex64::new(-s, -t))
        .collect();
    ComplexField::from_parts(*state.grid(), values)
}

/// Solves `sqrt(mu^2 - Laplacian) k = -psi1` mode by mode.
///
/// Fails with [`Error::SingularMode`] when `mu = 0` and `psi1` has a nonzero
/// mean.
pub fn k_profile(psi1_at_0: &RealField, constants: &PhysicalConstants) -> Result<RealField> {
    let grid = *psi1_at_0.grid();
    let plan = FftPlan::for_grid(&grid);
    let mut s = forward_with(&plan, &psi1_at_0.to_complex());
    let mu = constants.mu();
    // a zero-mode coefficient below this is treated as round-off
    let tiny = 1e-14 * s.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    for (slot, c) in s.coeffs_mut().iter_mut().enumerate() {
        let denom = mu.hypot(grid.wavenumber(slot));
        if denom == 0.0 {
            if c.norm() > tiny {
                return Err(Error::SingularMode {
                    mode: grid.mode_index(slot),
                });
            }
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c = -*c / denom;
        }
    }
    Ok(split_real(inverse_with(&plan, &s)).0)
}

/// Reconstructs `(phi, phi_dot)` at time `t` from the initial wave function
/// `psi0` of a free square-root solution.
///
/// The time integral of `Im psi` is done per mode in closed form:
/// `int_0^t exp(-i w s) ds = exp(-i w t / 2) * 2 sin(w t / 2) / w`.
pub fn phi_from_psi(psi0: &ComplexField, t: f64, constants: &PhysicalConstants) -> Result<KleinGordonState> {
    let grid = *psi0.grid();
    let k = k_profile(&psi0.real_part(), constants)?;
    let plan = FftPlan::for_grid(&grid);
    let mut integral = forward_with(&plan, psi0);
    for (c, w) in integral.coeffs_mut().iter_mut().zip(dispersion(&grid, constants)) {
        let factor = if w == 0.0 {
            Complex64::new(t, 0.0)
        } else {
            let half = 0.5 * w * t;
            Complex64::from_polar(2.0 * half.sin() / w, -half)
        };
        *c *= factor;
    }
    let integral = inverse_with(&plan, &integral);
    let c = constants.c();
    let phi: Vec<f64> = k
        .values()
        .iter()
        .zip(integral.values())
        .map(|(kv, i)| kv - c * i.im)
        .collect();
    let psi_t = sqrt_propagate(psi0, t, constants);
    let phi_dot = psi_t.imag_part().scale(-c);
    KleinGordonState::new(RealField::from_parts(grid, phi), phi_dot, t)
}

/// `(phi_dot / c)^2 + (sqrt(mu^2 - Laplacian) phi)^2`, the same arithmetic
/// as `|psi_from_phi(state)|^2`.
pub fn density_from_phi(state: &KleinGordonState, constants: &PhysicalConstants) -> RealField {
    energy_density(state, constants)
}

/// Largest per-mode residual of `i d_t psi / c - sqrt(mu^2 - Laplacian) psi`
/// for `psi = psi_from_phi(state)`, relative to the largest
/// `|sqrt(mu^2 + k^2) psi_k|`.
///
/// `d_t psi` is taken analytically from the Klein-Gordon mode equation
/// `phi_tt = -w^2 phi`.
pub fn sqrt_equation_residual(state: &KleinGordonState, constants: &PhysicalConstants) -> f64 {
    let grid = *state.grid();
    let plan = FftPlan::for_grid(&grid);
    let c = constants.c();
    let psi = forward_with(&plan, &psi_from_phi(state, constants));
    let phi = forward_with(&plan, &state.phi().to_complex());
    let phi_dot = forward_with(&plan, &state.phi_dot().to_complex());
    let omega = dispersion(&grid, constants);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (slot, &w) in omega.iter().enumerate() {
        let a = w / c;
        let phi_ddot = -w * w * phi.coeffs()[slot];
        let psi_dot = -phi_dot.coeffs()[slot] * a - Complex64::i() * phi_ddot / c;
        let lhs = Complex64::i() * psi_dot / c;
        let rhs = psi.coeffs()[slot] * a;
        worst = worst.max((lhs - rhs).norm());
        scale = scale.max(rhs.norm());
    }
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

/// `phi_tt` of a field built by [`phi_from_psi`], from the propagated wave
/// function `psi_t`: `phi_tt = c^2 Re(sqrt(mu^2 - Laplacian) psi_t)`.
pub fn phi_ddot_from_psi(psi_t: &ComplexField, constants: &PhysicalConstants) -> RealField {
    let c = constants.c();
    let (applied, _) = apply_real(&psi_t.real_part(), &SpectralMultiplier::sqrt_kg(constants.mu()));
    applied.scale(c * c)
}

/// `||phi_tt / c^2 + (mu^2 - Laplacian) phi|| / ||(mu^2 - Laplacian) phi||`.
pub fn kg_equation_residual(phi: &RealField, phi_ddot: &RealField, constants: &PhysicalConstants) -> Result<f64> {
    let mu = constants.mu();
    let (operator, _) = apply_real(phi, &SpectralMultiplier::real("mu^2 - laplacian", move |k| mu * mu + k * k));
    let c2 = constants.c() * constants.c();
    let lhs = phi_ddot.scale(1.0 / c2).add(&operator)?;
    Ok(relative(lhs.l2_norm(), operator.l2_norm()))
}

fn relative(diff: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        diff
    } else {
        diff / reference
    }
}

fn relative_real(a: &RealField, b: &RealField) -> Result<f64> {
    Ok(relative(a.add(&b.scale(-1.0))?.l2_norm(), b.l2_norm()))
}

fn relative_complex(a: &ComplexField, b: &ComplexField) -> Result<f64> {
    Ok(relative(
        crate::spectral::norm(&a.sub(b)?),
        crate::spectral::norm(b),
    ))
}

/// Runs both directions of the equivalence over `[0, total_time]`.
///
/// 1. Evolves `phi0` under Klein-Gordon, maps it forward and checks the
///    square-root equation and agreement with the exactly propagated
///    `psi_from_phi(phi0)`.
/// 2. Rebuilds `phi` at `total_time` from `psi_from_phi(phi0)` and checks it
///    against the Klein-Gordon equation and the directly evolved field.
/// 3. Maps the rebuilt field forward again (round trip).
/// 4. Compares `|psi|^2` with the field's energy density.
pub fn verify_equivalence(
    phi0: &KleinGordonState,
    total_time: f64,
    params: &EvolutionParams,
) -> Result<EquivalenceReport> {
    if params.potential().is_some() {
        return Err(Error::Unsupported("the equivalence maps are free-field only"));
    }
    let dt = params.dt();
    let ratio = total_time / dt;
    let steps = ratio.round();
    if !(total_time >= 0.0) || (ratio - steps).abs() > 1e-9 * steps.max(1.0) {
        return Err(Error::NotIntegerMultiple { time: total_time, dt });
    }
    let constants = params.constants();
    let params = params.clone().with_steps(steps as usize);
    let elapsed = params.duration();

    let evolved = evolve_klein_gordon(phi0, &params)?;
    let psi_forward = psi_from_phi(&evolved, constants);
    let psi0 = psi_from_phi(phi0, constants);
    let psi_t = sqrt_propagate(&psi0, elapsed, constants);
    let schrodinger_residual =
        sqrt_equation_residual(&evolved, constants).max(relative_complex(&psi_forward, &psi_t)?);

    let rebuilt = phi_from_psi(&psi0, elapsed, constants)?;
    let kg_residual = kg_equation_residual(rebuilt.phi(), &phi_ddot_from_psi(&psi_t, constants), constants)?
        .max(relative_real(rebuilt.phi(), evolved.phi())?)
        .max(relative_real(rebuilt.phi_dot(), evolved.phi_dot())?);

    let roundtrip_residual = relative_complex(&psi_from_phi(&rebuilt, constants), &psi_t)?;

    let density = density_from_phi(&evolved, constants);
    let density_residual = psi_forward
        .density()
        .max_abs_diff(&density)?;

    Ok(EquivalenceReport {
        schrodinger_residual,
        kg_residual,
        roundtrip_residual,
        density_residual,
    })
}
