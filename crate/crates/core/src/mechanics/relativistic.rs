use alloc::vec::Vec;

use super::model::dot;
use crate::spectral::PhysicalConstants;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RelativisticMomenta {
    pub p: Vec<f64>,
    pub p_t: f64,
}

/// Momenta of the lifted action `-m c t' sqrt(c^2 - x'^2 / t'^2)` in the
/// physical-time gauge `t' = 1`: `p = m v / sqrt(1 - v^2/c^2)` and
/// `p_t = dL~/dt' = -m c^3 / sqrt(c^2 - v^2)`.
pub fn relativistic_momenta(v: &[f64], constants: &PhysicalConstants) -> Result<RelativisticMomenta> {
    let (m, c) = (constants.mass(), constants.c());
    let speed = dot(v, v).sqrt();
    if !(speed < c) {
        return Err(Error::Superluminal { speed, c });
    }
    let root = (c * c - speed * speed).sqrt();
    Ok(RelativisticMomenta {
        p: v.iter().map(|x| m * c * x / root).collect(),
        p_t: -m * c * c * c / root,
    })
}

/// `|p_t + c sqrt(m^2 c^2 + p^2)|`.
pub fn mass_shell_residual(momenta: &RelativisticMomenta, constants: &PhysicalConstants) -> f64 {
    let (m, c) = (constants.mass(), constants.c());
    (momenta.p_t + c * (m * m * c * c + dot(&momenta.p, &momenta.p)).sqrt()).abs()
}

/// `-m c t' sqrt(c^2 - x'^2 / t'^2)`, the lifted relativistic Lagrangian.
pub fn lifted_relativistic_lagrangian(xdot: &[f64], tdot: f64, constants: &PhysicalConstants) -> f64 {
    let c = constants.c();
    -constants.mass() * c * tdot * (c * c - dot(xdot, xdot) / (tdot * tdot)).sqrt()
}

/// `-m c sqrt(eta(x', x'))` with `x^0 = c t` and signature `(+, -, -, -)`.
pub fn covariant_relativistic_lagrangian(xdot: &[f64], tdot: f64, constants: &PhysicalConstants) -> f64 {
    let c = constants.c();
    let interval = (c * tdot) * (c * tdot) - dot(xdot, xdot);
    -constants.mass() * c * interval.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::central4;
    use alloc::vec;

    #[test]
    fn rest_and_point_six() {
        let k = PhysicalConstants::natural();
        let rest = relativistic_momenta(&[0.0], &k).unwrap();
        assert_eq!(rest.p, vec![0.0]);
        assert_eq!(rest.p_t, -1.0);
        let m = relativistic_momenta(&[0.6], &k).unwrap();
        assert!((m.p[0] - 0.75).abs() < 1e-15);
        assert!((m.p_t + 1.25).abs() < 1e-15);
        assert!(mass_shell_residual(&m, &k) < 1e-14);
    }

    #[test]
    fn superluminal_rejected() {
        let k = PhysicalConstants::natural();
        assert!(matches!(relativistic_momenta(&[1.0], &k), Err(Error::Superluminal { .. })));
        assert!(matches!(relativistic_momenta(&[0.8, 0.7], &k), Err(Error::Superluminal { .. })));
    }

    #[test]
    fn p_t_is_derivative_in_tdot() {
        let k = PhysicalConstants::new(1.0, 2.0, 0.7).unwrap();
        let v = [0.9, -1.1];
        let numeric = central4(|td| lifted_relativistic_lagrangian(&v, td, &k), 1.0, 1e-3);
        let m = relativistic_momenta(&v, &k).unwrap();
        assert!((numeric - m.p_t).abs() < 1e-9, "{numeric} vs {}", m.p_t);
    }

    #[test]
    fn covariant_form_matches_lifted_form() {
        let k = PhysicalConstants::new(1.0, 3.0, 2.0).unwrap();
        for (xdot, tdot) in [(vec![0.5, 1.0, -2.0], 1.3), (vec![0.1], 0.2), (vec![2.9], 1.0)] {
            let a = lifted_relativistic_lagrangian(&xdot, tdot, &k);
            let b = covariant_relativistic_lagrangian(&xdot, tdot, &k);
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }
}
