use alloc::vec::Vec;

use super::model::{dot, legendre_momenta, physical_hamiltonian, LagrangianModel};
use super::PhaseState;
use crate::{Error, Result};

/// `p_t + H(q, p, t)`; vanishes on solutions.
pub fn ri_constraint(model: &LagrangianModel, state: &PhaseState) -> Result<f64> {
    Ok(state.p_t + physical_hamiltonian(model, &state.q, &state.p, state.t)?)
}

/// Canonical Hamiltonian of the lifted Lagrangian `t' L(q, q'/t', t)` at one
/// point of the extended velocity space.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalHamiltonian {
    /// `p q' + p_t t' - t' L`.
    pub value: f64,
    /// `|value - t' (p_t + H(q, p, t))|`.
    pub factorization_residual: f64,
    pub p: Vec<f64>,
    pub p_t: f64,
}

/// Evaluates the lifted canonical Hamiltonian at `(q, q', t, t')`.
///
/// `p` is `dL/dv` at `v = q'/t'`. With `p_t = None` the energy momentum is
/// the Lagrangian one, `L - v dL/dv`, and `value` vanishes; passing an
/// explicit `p_t` evaluates off the constraint surface, where `value` is
/// `t' (p_t + H)`.
pub fn canonical_hamiltonian_ri(
    model: &LagrangianModel,
    q: &[f64],
    qdot: &[f64],
    t: f64,
    tdot: f64,
    p_t: Option<f64>,
) -> Result<CanonicalHamiltonian> {
    if !(tdot > 0.0) {
        return Err(Error::NonPositiveTdot(tdot));
    }
    model.check_dim(qdot)?;
    let v: Vec<f64> = qdot.iter().map(|x| x / tdot).collect();
    let p = legendre_momenta(model, q, &v, t)?;
    let lagrangian = model.lagrangian(q, &v, t);
    let p_t = p_t.unwrap_or_else(|| lagrangian - dot(&v, &p));
    let lifted = tdot * lagrangian;
    let value = dot(&p, qdot) + p_t * tdot - lifted;
    let h = physical_hamiltonian(model, q, &p, t)?;
    Ok(CanonicalHamiltonian {
        value,
        factorization_residual: (value - tdot * (p_t + h)).abs(),
        p,
        p_t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::PhysicalConstants;
    use alloc::vec;

    fn state(q: f64, p: f64, p_t: f64) -> PhaseState {
        PhaseState {
            q: vec![q],
            p: vec![p],
            t: 0.0,
            p_t,
            tau: 0.0,
        }
    }

    #[test]
    fn constraint_examples() {
        let free = LagrangianModel::free_particle(1.0, 1);
        assert!(ri_constraint(&free, &state(0.0, 2.0, -2.0)).unwrap().abs() < 1e-12);
        let perturbed = ri_constraint(&free, &state(0.0, 2.0, -1.9)).unwrap();
        assert!((perturbed - 0.1).abs() < 1e-12);
        let rel = LagrangianModel::relativistic(&PhysicalConstants::natural(), 1);
        assert!(ri_constraint(&rel, &state(0.0, 0.0, -1.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn on_shell_value_vanishes_and_scales() {
        let m = LagrangianModel::harmonic(1.3, 0.7);
        let on = canonical_hamiltonian_ri(&m, &[0.2], &[0.9], 0.1, 1.7, None).unwrap();
        assert!(on.value.abs() < 1e-10);
        assert!(on.factorization_residual < 1e-10);

        let a = canonical_hamiltonian_ri(&m, &[0.2], &[0.9], 0.1, 1.5, Some(0.4)).unwrap();
        let b = canonical_hamiltonian_ri(&m, &[0.2], &[1.8], 0.1, 3.0, Some(0.4)).unwrap();
        assert!(a.value.abs() > 0.1);
        assert!((b.value - 2.0 * a.value).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_positive_tdot() {
        let m = LagrangianModel::free_particle(1.0, 1);
        assert_eq!(
            canonical_hamiltonian_ri(&m, &[0.0], &[1.0], 0.0, 0.0, None).unwrap_err(),
            Error::NonPositiveTdot(0.0)
        );
    }
}
