//! Central finite-difference stencils.

/// Relative step used for derivatives of the Lagrangian in the Legendre map.
pub(crate) const LEGENDRE_STEP: f64 = 1e-5;

/// Relative step used for derivatives on phase space (Hamilton's equations,
/// Poisson brackets). Sized for the fourth-order stencil.
pub(crate) const PHASE_SPACE_STEP: f64 = 1e-4;

pub(crate) fn step_for(x: f64, relative: f64) -> f64 {
    relative * (1.0 + x.abs())
}

/// Fourth-order central difference of `f` at `x` with step `h`.
#[inline]
pub(crate) fn central4(mut f: impl FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    let f1 = f(x + h);
    let fm1 = f(x - h);
    let f2 = f(x + 2.0 * h);
    let fm2 = f(x - 2.0 * h);
    (8.0 * (f1 - fm1) - (f2 - fm2)) / (12.0 * h)
}
