//! Classical mechanics in the parametric (reparametrization-invariant) form.
//!
//! A regular Lagrangian `L(q, v, t)` is lifted to `t' L(q, q'/t', t)` on the
//! extended configuration space `(q, t)`, with `'` denoting `d/dtau`. The
//! lift has the constraint `p_t + H(q, p, t) = 0` and a canonical
//! Hamiltonian equal to `t'` times that constraint. Trajectories are
//! integrated in physical time and then re-parametrized by a gauge function
//! `t = g(tau)`; eliminating `tau` again recovers `q(t)` independently of
//! the gauge.

use alloc::string::String;
use alloc::vec::Vec;

mod bracket;
mod constraint;
mod gauge;
mod integrate;
mod model;
mod relativistic;

pub use bracket::poisson_bracket;
pub use constraint::{canonical_hamiltonian_ri, ri_constraint, CanonicalHamiltonian};
pub use gauge::{lift_to_ri, reconstruct_physical, GaugeFunction, PhysicalPath};
pub use integrate::integrate_physical;
pub use model::{invert_velocities, legendre_momenta, physical_hamiltonian, LagrangianModel};
pub use relativistic::{
    covariant_relativistic_lagrangian, lifted_relativistic_lagrangian, mass_shell_residual, relativistic_momenta,
    RelativisticMomenta,
};

/// A point `(q, p, t, p_t)` of extended phase space, tagged with the
/// parameter value `tau`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseState {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub t: f64,
    pub p_t: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryMeta {
    pub model: String,
    /// Parameter step between samples.
    pub step: f64,
    pub gauge: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    /// Largest `|p_t + H|` over the samples.
    pub fn max_constraint(&self, model: &LagrangianModel) -> crate::Result<f64> {
        self.samples
            .iter()
            .try_fold(0.0f64, |m, s| Ok(m.max(ri_constraint(model, s)?.abs())))
    }
}
