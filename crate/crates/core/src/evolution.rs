//! Time evolution for the nonrelativistic Schrödinger equation, the free
//! square-root relativistic equation and the real Klein-Gordon field.
//!
//! The two free relativistic propagators are exact per Fourier mode and share
//! one dispersion relation, `omega_k = c sqrt(mu^2 + k^2)`. The
//! nonrelativistic propagator uses Strang splitting when a potential is
//! present.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::spectral::{
    forward_with, inner_product, inverse_with, split_real, ComplexField, FftPlan, GridSpec,
    PhysicalConstants, RealField, SpectralMultiplier,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SchrodingerState {
    pub psi: ComplexField,
    pub time: f64,
}

impl SchrodingerState {
    pub fn new(psi: ComplexField, time: f64) -> Self {
        Self { psi, time }
    }

    pub fn grid(&self) -> &GridSpec {
        self.psi.grid()
    }
}

/// A real Klein-Gordon field and its time derivative at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct KleinGordonState {
    phi: RealField,
    phi_dot: RealField,
    time: f64,
}

impl KleinGordonState {
    pub fn new(phi: RealField, phi_dot: RealField, time: f64) -> Result<Self> {
        if phi.grid() != phi_dot.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { phi, phi_dot, time })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            phi: RealField::zeros(grid),
            phi_dot: RealField::zeros(grid),
            time: 0.0,
        }
    }

    pub fn phi(&self) -> &RealField {
        &self.phi
    }

    pub fn phi_dot(&self) -> &RealField {
        &self.phi_dot
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn grid(&self) -> &GridSpec {
        self.phi.grid()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionParams {
    dt: f64,
    steps: usize,
    constants: PhysicalConstants,
    potential: Option<RealField>,
}

impl EvolutionParams {
    pub fn new(dt: f64, steps: usize, constants: PhysicalConstants) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParams(alloc::format!("dt = {dt} must be positive")));
        }
        Ok(Self {
            dt,
            steps,
            constants,
            potential: None,
        })
    }

    /// Static potential `V(x)` in energy units.
    pub fn with_potential(mut self, potential: RealField) -> Self {
        self.potential = Some(potential);
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn potential(&self) -> Option<&RealField> {
        self.potential.as_ref()
    }

    /// `steps * dt`.
    pub fn duration(&self) -> f64 {
        self.steps as f64 * self.dt
    }
}

/// `c sqrt(mu^2 + k^2)`.
pub fn mode_frequency(k: f64, constants: &PhysicalConstants) -> f64 {
    constants.c() * constants.mu().hypot(k)
}

/// [`mode_frequency`] at every slot of `grid`.
pub fn dispersion(grid: &GridSpec, constants: &PhysicalConstants) -> Vec<f64> {
    grid.wavenumbers()
        .into_iter()
        .map(|k| mode_frequency(k, constants))
        .collect()
}

fn phase(angle: f64) -> Complex64 {
    Complex64::new(angle.cos(), angle.sin())
}

/// Strang-split propagation of `i hbar psi_t = -hbar^2/(2m) psi_xx + V psi`.
///
/// Without a potential the kinetic multiplier is applied once for the whole
/// interval, which is exact.
pub fn evolve_schrodinger(state: &SchrodingerState, params: &EvolutionParams) -> Result<SchrodingerState> {
    let k = params.constants();
    if k.mass() == 0.0 {
        return Err(Error::Unsupported("nonrelativistic evolution needs a positive mass"));
    }
    let grid = *state.grid();
    let plan = FftPlan::for_grid(&grid);
    let kinetic = |tau: f64| -> Vec<Complex64> {
        grid.wavenumbers()
            .into_iter()
            .map(|kk| phase(-k.hbar() * kk * kk * tau / (2.0 * k.mass())))
            .collect()
    };
    let end = state.time + params.duration();

    let Some(potential) = params.potential() else {
        let mut s = forward_with(&plan, &state.psi);
        for (c, p) in s.coeffs_mut().iter_mut().zip(kinetic(params.duration())) {
            *c *= p;
        }
        return Ok(SchrodingerState::new(inverse_with(&plan, &s), end));
    };
    if potential.grid() != &grid {
        return Err(Error::GridMismatch);
    }

    let half_kick: Vec<Complex64> = potential
        .values()
        .iter()
        .map(|v| phase(-v * params.dt() / (2.0 * k.hbar())))
        .collect();
    let drift = kinetic(params.dt());
    let mut psi = state.psi.values().to_vec();
    for _ in 0..params.steps() {
        psi.iter_mut().zip(&half_kick).for_each(|(z, p)| *z *= p);
        plan.forward(&mut psi);
        psi.iter_mut().zip(&drift).for_each(|(z, p)| *z *= p);
        plan.inverse(&mut psi);
        psi.iter_mut().zip(&half_kick).for_each(|(z, p)| *z *= p);
    }
    Ok(SchrodingerState::new(ComplexField::from_parts(grid, psi), end))
}

/// Exact free propagation of `i psi_t / c = sqrt(mu^2 - Laplacian) psi`:
/// every mode picks up `exp(-i omega_k steps dt)`.
pub fn evolve_sqrt_schrodinger(
    state: &SchrodingerState,
    params: &EvolutionParams,
) -> Result<SchrodingerState> {
    if params.potential().is_some() {
        return Err(Error::Unsupported("the square-root propagator is free-particle only"));
    }
    Ok(SchrodingerState::new(
        sqrt_propagate(&state.psi, params.duration(), params.constants()),
        state.time + params.duration(),
    ))
}

pub(crate) fn sqrt_propagate(psi: &ComplexField, elapsed: f64, constants: &PhysicalConstants) -> ComplexField {
    let grid = *psi.grid();
    let plan = FftPlan::for_grid(&grid);
    let mut s = forward_with(&plan, psi);
    for (c, w) in s.coeffs_mut().iter_mut().zip(dispersion(&grid, constants)) {
        *c *= phase(-w * elapsed);
    }
    inverse_with(&plan, &s)
}

/// Exact mode rotation of the Klein-Gordon field over `steps * dt`.
pub fn evolve_klein_gordon(state: &KleinGordonState, params: &EvolutionParams) -> Result<KleinGordonState> {
    let (phi, phi_dot) = kg_rotate(state, params.duration(), params.constants());
    let (phi, _) = split_real(phi);
    let (phi_dot, _) = split_real(phi_dot);
    KleinGordonState::new(phi, phi_dot, state.time + params.duration())
}

/// Rotated `(phi, phi_dot)` before the imaginary round-off is dropped.
pub(crate) fn kg_rotate(
    state: &KleinGordonState,
    elapsed: f64,
    constants: &PhysicalConstants,
) -> (ComplexField, ComplexField) {
    let grid = *state.grid();
    let plan = FftPlan::for_grid(&grid);
    let mut a = forward_with(&plan, &state.phi.to_complex());
    let mut b = forward_with(&plan, &state.phi_dot.to_complex());
    for ((x, v), w) in a
        .coeffs_mut()
        .iter_mut()
        .zip(b.coeffs_mut().iter_mut())
        .zip(dispersion(&grid, constants))
    {
        let (x0, v0) = (*x, *v);
        if w == 0.0 {
            *x = x0 + v0 * elapsed;
        } else {
            let (sin, cos) = (w * elapsed).sin_cos();
            *x = x0 * cos + v0 * (sin / w);
            *v = -x0 * (w * sin) + v0 * cos;
        }
    }
    (inverse_with(&plan, &a), inverse_with(&plan, &b))
}

/// `(phi_dot / c)^2 + (sqrt(mu^2 - Laplacian) phi)^2` at every sample.
pub fn energy_density(state: &KleinGordonState, constants: &PhysicalConstants) -> RealField {
    let (time_part, space_part) = density_parts(state, constants);
    let values = time_part
        .values()
        .iter()
        .zip(space_part.values())
        .map(|(t, s)| t * t + s * s)
        .collect();
    RealField::from_parts(*state.grid(), values)
}

/// `(phi_dot / c, sqrt(mu^2 - Laplacian) phi)`.
pub(crate) fn density_parts(state: &KleinGordonState, constants: &PhysicalConstants) -> (RealField, RealField) {
    let (space, _) = crate::spectral::apply_real(state.phi(), &SpectralMultiplier::sqrt_kg(constants.mu()));
    (state.phi_dot().scale(1.0 / constants.c()), space)
}

/// `sum dx [(phi_dot / c)^2 + (sqrt(mu^2 - Laplacian) phi)^2]`.
pub fn kg_energy(state: &KleinGordonState, constants: &PhysicalConstants) -> f64 {
    energy_density(state, constants).integral()
}

/// Removes the rest-energy phase: `chi = exp(+i m c^2 t / hbar) psi`.
pub fn nonrel_reduce(state: &SchrodingerState, constants: &PhysicalConstants) -> ComplexField {
    state
        .psi
        .scale(phase(constants.rest_energy() * state.time / constants.hbar()))
}

/// Angular-frequency mismatch between the reduced relativistic evolution of
/// plane wave `mode` and its nonrelativistic evolution, measured from the
/// overlap phase after `elapsed` time. Requires the accumulated phase error
/// to stay below `pi`.
pub fn nonrel_limit_residual(
    grid: &GridSpec,
    constants: &PhysicalConstants,
    mode: i64,
    elapsed: f64,
) -> Result<f64> {
    let start = SchrodingerState::new(ComplexField::plane_wave(*grid, mode), 0.0);
    let params = EvolutionParams::new(elapsed, 1, *constants)?;
    let relativistic = evolve_sqrt_schrodinger(&start, &params)?;
    let reduced = nonrel_reduce(&relativistic, constants);
    let nonrel = evolve_schrodinger(&start, &params)?;
    let overlap = inner_product(&nonrel.psi, &reduced)?;
    Ok(overlap.arg().abs() / elapsed)
}

/// Largest `|Im <psi, i hbar d_t psi>| / <psi, psi>` over the interior
/// snapshots, with `d_t psi` from central differences.
///
/// Snapshots must be equally spaced in time.
pub fn pt_reality_residual(snapshots: &[SchrodingerState], hbar: f64) -> Result<f64> {
    if snapshots.len() < 3 {
        return Err(Error::TooFewSnapshots { got: snapshots.len() });
    }
    let dt = snapshots[1].time - snapshots[0].time;
    if !(dt > 0.0) {
        return Err(Error::NonUniformSpacing { index: 0 });
    }
    for (i, w) in snapshots.windows(2).enumerate() {
        if ((w[1].time - w[0].time) - dt).abs() > 1e-9 * dt.abs().max(1e-300) {
            return Err(Error::NonUniformSpacing { index: i });
        }
    }
    let i_hbar = Complex64::new(0.0, hbar);
    let mut worst = 0.0f64;
    for w in snapshots.windows(3) {
        let derivative = w[2].psi.sub(&w[0].psi)?.scale(Complex64::new(1.0 / (2.0 * dt), 0.0));
        let psi = &w[1].psi;
        let expectation = inner_product(psi, &derivative)? * i_hbar;
        let norm_sq = inner_product(psi, psi)?.re;
        if norm_sq > 0.0 {
            worst = worst.max(expectation.im.abs() / norm_sq);
        }
    }
    Ok(worst)
}
