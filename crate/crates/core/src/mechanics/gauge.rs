use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::{PhaseState, Trajectory, TrajectoryMeta};
use crate::{Error, Result};

type RealFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A parametrization `t = g(tau)` with analytic derivative `g'(tau) > 0`.
#[derive(Clone)]
pub struct GaugeFunction {
    label: String,
    g: Arc<RealFn>,
    g_dot: Arc<RealFn>,
}

impl fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaugeFunction").field("label", &self.label).finish()
    }
}

impl GaugeFunction {
    pub fn new(
        label: impl Into<String>,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g_dot: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            g: Arc::new(g),
            g_dot: Arc::new(g_dot),
        }
    }

    pub fn identity() -> Self {
        Self::new("tau", |s| s, |_| 1.0)
    }

    /// `tau^3`; increasing for `tau > 0`.
    pub fn cubic() -> Self {
        Self::new("tau^3", |s| s * s * s, |s| 3.0 * s * s)
    }

    /// `exp(tau) - 1`.
    pub fn exp_minus_one() -> Self {
        Self::new("exp(tau) - 1", |s| s.exp_m1(), |s| s.exp())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn time(&self, tau: f64) -> f64 {
        (self.g)(tau)
    }

    pub fn rate(&self, tau: f64) -> f64 {
        (self.g_dot)(tau)
    }
}

/// Index `i` with `xs[i] <= x <= xs[i + 1]`, clamped to valid intervals.
fn bracket(xs: &[f64], x: f64) -> usize {
    let i = xs.partition_point(|&v| v <= x);
    i.saturating_sub(1).min(xs.len().saturating_sub(2))
}

/// Local cubic through the four nodes around `x` (fewer near short data).
pub(crate) fn local_cubic(xs: &[f64], x: f64, y: impl Fn(usize) -> f64) -> f64 {
    let n = xs.len();
    if n == 1 {
        return y(0);
    }
    let width = n.min(4);
    let i = bracket(xs, x);
    let start = i.saturating_sub(1).min(n - width);
    let nodes = start..start + width;
    let mut sum = 0.0;
    for j in nodes.clone() {
        let mut basis = 1.0;
        for m in nodes.clone() {
            if m != j {
                basis *= (x - xs[m]) / (xs[j] - xs[m]);
            }
        }
        sum += basis * y(j);
    }
    sum
}

fn check_increasing(times: &[f64]) -> Result<()> {
    match times.windows(2).position(|w| !(w[1] > w[0])) {
        Some(i) => Err(Error::NonMonotoneTime { index: i + 1 }),
        None => Ok(()),
    }
}

fn interpolate_state(samples: &[PhaseState], times: &[f64], t: f64, tau: f64) -> PhaseState {
    let dim = samples[0].q.len();
    let q = (0..dim).map(|a| local_cubic(times, t, |i| samples[i].q[a])).collect();
    let p = (0..dim).map(|a| local_cubic(times, t, |i| samples[i].p[a])).collect();
    let p_t = local_cubic(times, t, |i| samples[i].p_t);
    PhaseState { q, p, t, p_t, tau }
}

/// Re-parametrizes a physical-time trajectory by `t = g(tau)` on `count`
/// equally spaced `tau` values in `[tau_start, tau_end]`.
///
/// Phase-space values at `g(tau)` come from local cubic interpolation in
/// `t`; `t` itself is exact. Every `g'(tau)` on the grid must be positive
/// and `g` must map the interval inside the sampled time range.
pub fn lift_to_ri(
    traj: &Trajectory,
    gauge: &GaugeFunction,
    tau_start: f64,
    tau_end: f64,
    count: usize,
) -> Result<Trajectory> {
    if count < 2 || !(tau_end > tau_start) {
        return Err(Error::InvalidParams(alloc::format!(
            "need count >= 2 and tau_end > tau_start (count = {count}, [{tau_start}, {tau_end}])"
        )));
    }
    if traj.samples.is_empty() {
        return Err(Error::InvalidParams("empty trajectory".to_string()));
    }
    let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    check_increasing(&times)?;

    let taus: Vec<f64> = (0..count)
        .map(|i| tau_start + (tau_end - tau_start) * i as f64 / (count - 1) as f64)
        .collect();
    let mut targets = Vec::with_capacity(count);
    for &tau in &taus {
        let rate = gauge.rate(tau);
        let t = gauge.time(tau);
        if !(rate > 0.0) || !t.is_finite() {
            return Err(Error::GaugeNotMonotone { tau });
        }
        if let Some(&prev) = targets.last() {
            if !(t > prev) {
                return Err(Error::GaugeNotMonotone { tau });
            }
        }
        targets.push(t);
    }

    let (t_min, t_max) = (times[0], times[times.len() - 1]);
    let slack = 1e-12 * (1.0 + t_min.abs().max(t_max.abs()));
    let (start, end) = (targets[0], targets[count - 1]);
    if start < t_min - slack || end > t_max + slack {
        return Err(Error::GaugeRangeMismatch { start, end, t_min, t_max });
    }

    let samples = taus
        .iter()
        .zip(&targets)
        .map(|(&tau, &t)| interpolate_state(&traj.samples, &times, t.clamp(t_min, t_max), tau))
        .map(|mut s| {
            // keep the exact gauge time even when clamped for interpolation
            s.t = gauge.time(s.tau);
            s
        })
        .collect();
    Ok(Trajectory {
        samples,
        meta: TrajectoryMeta {
            model: traj.meta.model.clone(),
            step: (tau_end - tau_start) / (count - 1) as f64,
            gauge: gauge.label().to_string(),
        },
    })
}

/// `q(t)` recovered from a parametrized trajectory by eliminating the
/// parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalPath {
    times: Vec<f64>,
    positions: Vec<Vec<f64>>,
}

impl PhysicalPath {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn positions(&self) -> &[Vec<f64>] {
        &self.positions
    }

    /// `q(t)` by local cubic interpolation; `t` must lie in the sampled range.
    pub fn position(&self, t: f64) -> Result<Vec<f64>> {
        let (t_min, t_max) = (self.times[0], self.times[self.times.len() - 1]);
        if !(t >= t_min && t <= t_max) {
            return Err(Error::OutOfRange { t, t_min, t_max });
        }
        let dim = self.positions[0].len();
        Ok((0..dim)
            .map(|a| local_cubic(&self.times, t, |i| self.positions[i][a]))
            .collect())
    }
}

/// Drops `tau` and keeps `q` as a function of `t`.
pub fn reconstruct_physical(traj: &Trajectory) -> Result<PhysicalPath> {
    if traj.samples.is_empty() {
        return Err(Error::InvalidParams("empty trajectory".to_string()));
    }
    let times: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    check_increasing(&times)?;
    Ok(PhysicalPath {
        times,
        positions: traj.samples.iter().map(|s| s.q.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::{integrate_physical, LagrangianModel};
    use alloc::vec;

    #[test]
    fn cubic_interpolation_reproduces_cubics() {
        let xs = [0.0, 0.3, 0.5, 1.1, 1.7, 2.0];
        let f = |x: f64| 2.0 * x * x * x - x + 0.5;
        for x in [0.0, 0.1, 0.77, 1.5, 2.0] {
            let got = local_cubic(&xs, x, |i| f(xs[i]));
            assert!((got - f(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_lift_reproduces_samples() {
        let m = LagrangianModel::harmonic(1.0, 1.0);
        let traj = integrate_physical(&m, &[1.0], &[0.0], 0.0, 1.0, 0.01).unwrap();
        let lifted = lift_to_ri(&traj, &GaugeFunction::identity(), 0.0, 1.0, traj.samples.len()).unwrap();
        for (a, b) in lifted.samples.iter().zip(&traj.samples) {
            assert!((a.q[0] - b.q[0]).abs() < 1e-12);
            assert!((a.p[0] - b.p[0]).abs() < 1e-12);
            assert!((a.t - b.t).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_decreasing_gauge_and_range() {
        let m = LagrangianModel::free_particle(1.0, 1);
        let traj = integrate_physical(&m, &[0.0], &[1.0], 0.0, 1.0, 0.01).unwrap();
        let back = GaugeFunction::new("-tau", |s| -s, |_| -1.0);
        assert!(matches!(
            lift_to_ri(&traj, &back, -1.0, 0.0, 10),
            Err(Error::GaugeNotMonotone { .. })
        ));
        assert!(matches!(
            lift_to_ri(&traj, &GaugeFunction::cubic(), 0.5, 1.2, 10),
            Err(Error::GaugeRangeMismatch { .. })
        ));
    }

    #[test]
    fn reconstruct_rejects_non_monotone_time() {
        let s = |t: f64| PhaseState {
            q: vec![t],
            p: vec![0.0],
            t,
            p_t: 0.0,
            tau: t,
        };
        let traj = Trajectory {
            samples: vec![s(0.0), s(0.2), s(0.1)],
            meta: TrajectoryMeta::default(),
        };
        assert_eq!(reconstruct_physical(&traj).unwrap_err(), Error::NonMonotoneTime { index: 2 });
    }

    #[test]
    fn path_rejects_out_of_range() {
        let m = LagrangianModel::free_particle(1.0, 1);
        let traj = integrate_physical(&m, &[0.0], &[1.0], 0.0, 1.0, 0.1).unwrap();
        let path = reconstruct_physical(&traj).unwrap();
        assert!(matches!(path.position(1.5), Err(Error::OutOfRange { .. })));
        assert!((path.position(0.55).unwrap()[0] - 0.55).abs() < 1e-12);
    }
}
