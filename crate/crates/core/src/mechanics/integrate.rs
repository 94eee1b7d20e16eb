use alloc::string::ToString;
use alloc::vec::Vec;

use super::model::{invert_velocities, legendre_momenta, physical_hamiltonian, LagrangianModel};
use super::{PhaseState, Trajectory, TrajectoryMeta};
use crate::diff::{central4, step_for, PHASE_SPACE_STEP};
use crate::{Error, Result};

/// Right-hand side of Hamilton's equations on the extended phase space with
/// `t` as the parameter: `(dq/dt, dp/dt, dp_t/dt)`.
///
/// Uses `dH/dp = v(q, p, t)`, `dH/dq = -dL/dq` and `dH/dt = -dL/dt` at fixed
/// velocity, so only the Lagrangian is differenced.
fn hamilton_rhs(model: &LagrangianModel, q: &[f64], p: &[f64], t: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let v = invert_velocities(model, q, p, t)?;
    let mut work = q.to_vec();
    let mut dp = Vec::with_capacity(q.len());
    for a in 0..q.len() {
        let d = central4(
            |x| {
                work[a] = x;
                model.lagrangian(&work, &v, t)
            },
            q[a],
            step_for(q[a], PHASE_SPACE_STEP),
        );
        work[a] = q[a];
        dp.push(d);
    }
    let dpt = central4(|s| model.lagrangian(q, &v, s), t, step_for(t, PHASE_SPACE_STEP));
    if dp.iter().all(|x| x.is_finite()) && dpt.is_finite() {
        Ok((v, dp, dpt))
    } else {
        Err(Error::NonFiniteLagrangian)
    }
}

/// Classical RK4 in physical time from `(q0, v0)` at `t0` to `t1`.
///
/// The step is `dt` adjusted down so an integer number of steps lands on
/// `t1`. `p_t` starts at `-H(q0, p0, t0)` and is integrated alongside
/// `(q, p)` with `dp_t/dt = -dH/dt`, so `p_t + H` along the output measures
/// the integration error. Samples carry `tau = t`.
pub fn integrate_physical(
    model: &LagrangianModel,
    q0: &[f64],
    v0: &[f64],
    t0: f64,
    t1: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !(t1 > t0) {
        return Err(Error::InvalidParams(alloc::format!(
            "need dt > 0 and t1 > t0 (dt = {dt}, t0 = {t0}, t1 = {t1})"
        )));
    }
    let dim = model.dim();
    model.check_dim(q0)?;
    let p0 = legendre_momenta(model, q0, v0, t0)?;
    let pt0 = -physical_hamiltonian(model, q0, &p0, t0)?;

    let steps = ((t1 - t0) / dt).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;

    // packed as [q.., p.., p_t]
    let mut y: Vec<f64> = q0.iter().chain(&p0).copied().chain([pt0]).collect();
    let rhs = |y: &[f64], t: f64| -> Result<Vec<f64>> {
        let (dq, dp, dpt) = hamilton_rhs(model, &y[..dim], &y[dim..2 * dim], t)?;
        Ok(dq.into_iter().chain(dp).chain([dpt]).collect())
    };
    let axpy = |y: &[f64], k: &[f64], s: f64| -> Vec<f64> { y.iter().zip(k).map(|(a, b)| a + s * b).collect() };

    let sample = |y: &[f64], t: f64| PhaseState {
        q: y[..dim].to_vec(),
        p: y[dim..2 * dim].to_vec(),
        t,
        p_t: y[2 * dim],
        tau: t,
    };

    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(sample(&y, t0));
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = rhs(&y, t)?;
        let k2 = rhs(&axpy(&y, &k1, h / 2.0), t + h / 2.0)?;
        let k3 = rhs(&axpy(&y, &k2, h / 2.0), t + h / 2.0)?;
        let k4 = rhs(&axpy(&y, &k3, h), t + h)?;
        for j in 0..y.len() {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t_next = if i + 1 == steps { t1 } else { t0 + (i + 1) as f64 * h };
        samples.push(sample(&y, t_next));
    }
    Ok(Trajectory {
        samples,
        meta: TrajectoryMeta {
            model: model.label().to_string(),
            step: h,
            gauge: "identity".to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::ri_constraint;

    #[test]
    fn free_particle_moves_linearly() {
        let m = LagrangianModel::free_particle(1.0, 1);
        let traj = integrate_physical(&m, &[0.5], &[2.0], 0.0, 1.0, 1e-2).unwrap();
        for s in &traj.samples {
            assert!((s.q[0] - (0.5 + 2.0 * s.t)).abs() < 1e-10);
        }
        assert_eq!(traj.samples.last().unwrap().t, 1.0);
    }

    #[test]
    fn harmonic_energy_over_one_period() {
        let m = LagrangianModel::harmonic(1.0, 1.0);
        let period = core::f64::consts::TAU;
        let traj = integrate_physical(&m, &[1.0], &[0.0], 0.0, period, 1e-3).unwrap();
        let e0 = 0.5;
        for s in traj.samples.iter().step_by(97) {
            let e = 0.5 * (s.q[0] * s.q[0] + s.p[0] * s.p[0]);
            assert!((e - e0).abs() / e0 < 1e-10);
        }
        let end = traj.samples.last().unwrap();
        assert!((end.q[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rk4_is_fourth_order() {
        let m = LagrangianModel::harmonic(1.0, 1.0);
        let t1 = 2.0;
        let err = |dt: f64| {
            let traj = integrate_physical(&m, &[1.0], &[0.0], 0.0, t1, dt).unwrap();
            (traj.samples.last().unwrap().q[0] - t1.cos()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn time_dependent_potential_moves_p_t() {
        // V = q t: dp_t/dt = -q
        let m = LagrangianModel::with_potential("driven", 1.0, 1, |q, t| q[0] * t);
        let traj = integrate_physical(&m, &[1.0], &[0.0], 0.0, 1.0, 1e-2).unwrap();
        let first = &traj.samples[0];
        let last = traj.samples.last().unwrap();
        assert!((last.p_t - first.p_t).abs() > 0.1);
        for s in &traj.samples {
            assert!(ri_constraint(&m, s).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_interval() {
        let m = LagrangianModel::free_particle(1.0, 1);
        assert!(integrate_physical(&m, &[0.0], &[1.0], 1.0, 0.0, 0.1).is_err());
        assert!(integrate_physical(&m, &[0.0], &[1.0], 0.0, 1.0, 0.0).is_err());
    }
}
