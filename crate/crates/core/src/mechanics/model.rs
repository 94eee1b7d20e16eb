use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diff::{central4, step_for, LEGENDRE_STEP};
use crate::spectral::PhysicalConstants;
use crate::{Error, Result};

type ScalarFn = dyn Fn(&[f64], &[f64], f64) -> f64 + Send + Sync;
type VectorFn = dyn Fn(&[f64], &[f64], f64) -> Vec<f64> + Send + Sync;

/// A Lagrangian `L(q, v, t)` on a `dim`-dimensional configuration space.
///
/// Momenta come from the optional analytic evaluator, or from fourth-order
/// central differences of `L` in the velocities.
#[derive(Clone)]
pub struct LagrangianModel {
    label: String,
    dim: usize,
    lagrangian: Arc<ScalarFn>,
    momenta: Option<Arc<VectorFn>>,
    speed_limit: Option<f64>,
}

impl fmt::Debug for LagrangianModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LagrangianModel")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("analytic_momenta", &self.momenta.is_some())
            .field("speed_limit", &self.speed_limit)
            .finish()
    }
}

impl LagrangianModel {
    pub fn new(
        label: impl Into<String>,
        dim: usize,
        lagrangian: impl Fn(&[f64], &[f64], f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            dim,
            lagrangian: Arc::new(lagrangian),
            momenta: None,
            speed_limit: None,
        }
    }

    pub fn with_momenta(mut self, momenta: impl Fn(&[f64], &[f64], f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.momenta = Some(Arc::new(momenta));
        self
    }

    /// Drops the analytic momenta so the finite-difference path is used.
    pub fn without_momenta(mut self) -> Self {
        self.momenta = None;
        self
    }

    /// Velocities must satisfy `|v| < limit`; velocity inversion keeps its
    /// iterates inside this ball.
    pub fn with_speed_limit(mut self, limit: f64) -> Self {
        self.speed_limit = Some(limit);
        self
    }

    /// `m v^2 / 2`.
    pub fn free_particle(mass: f64, dim: usize) -> Self {
        Self::with_potential("free particle", mass, dim, |_, _| 0.0)
    }

    /// `m v^2 / 2 - V(q, t)`.
    pub fn with_potential(
        label: impl Into<String>,
        mass: f64,
        dim: usize,
        potential: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(label, dim, move |q, v, t| 0.5 * mass * dot(v, v) - potential(q, t))
            .with_momenta(move |_, v, _| v.iter().map(|x| mass * x).collect())
    }

    /// One-dimensional `m v^2 / 2 - m w^2 q^2 / 2`.
    pub fn harmonic(mass: f64, omega: f64) -> Self {
        let k = mass * omega * omega;
        Self::with_potential("harmonic oscillator", mass, 1, move |q, _| 0.5 * k * q[0] * q[0])
    }

    /// `-m c sqrt(c^2 - v^2)`.
    pub fn relativistic(constants: &PhysicalConstants, dim: usize) -> Self {
        Self::relativistic_with_potential(constants, dim, |_, _| 0.0)
    }

    /// `-m c sqrt(c^2 - v^2) - V(q, t)`.
    pub fn relativistic_with_potential(
        constants: &PhysicalConstants,
        dim: usize,
        potential: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let (m, c) = (constants.mass(), constants.c());
        Self::new("relativistic particle", dim, move |q, v, t| {
            -m * c * (c * c - dot(v, v)).sqrt() - potential(q, t)
        })
        .with_momenta(move |_, v, _| {
            let gamma = 1.0 / (1.0 - dot(v, v) / (c * c)).sqrt();
            v.iter().map(|x| m * gamma * x).collect()
        })
        .with_speed_limit(c)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn speed_limit(&self) -> Option<f64> {
        self.speed_limit
    }

    pub fn has_analytic_momenta(&self) -> bool {
        self.momenta.is_some()
    }

    pub fn lagrangian(&self, q: &[f64], v: &[f64], t: f64) -> f64 {
        (self.lagrangian)(q, v, t)
    }

    pub(crate) fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            })
        }
    }

    fn inside(&self, v: &[f64]) -> bool {
        match self.speed_limit {
            Some(c) => dot(v, v).sqrt() < c * (1.0 - 1e-12),
            None => true,
        }
    }

    /// Finite-difference step in velocity component `a`, shrunk so the
    /// stencil stays inside the speed limit.
    fn velocity_step(&self, v: &[f64], a: usize, relative: f64) -> f64 {
        let h = step_for(v[a], relative);
        match self.speed_limit {
            Some(c) => {
                let room = c - dot(v, v).sqrt();
                h.min(room / 4.0).max(f64::MIN_POSITIVE)
            }
            None => h,
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `p_A = dL/dv^A`.
pub fn legendre_momenta(model: &LagrangianModel, q: &[f64], v: &[f64], t: f64) -> Result<Vec<f64>> {
    model.check_dim(q)?;
    model.check_dim(v)?;
    let p = match &model.momenta {
        Some(momenta) => momenta(q, v, t),
        None => {
            let mut work = v.to_vec();
            let mut p = vec![0.0; model.dim];
            for a in 0..model.dim {
                let h = model.velocity_step(v, a, LEGENDRE_STEP);
                p[a] = central4(
                    |x| {
                        work[a] = x;
                        model.lagrangian(q, &work, t)
                    },
                    v[a],
                    h,
                );
                work[a] = v[a];
            }
            p
        }
    };
    if p.iter().all(|x| x.is_finite()) {
        Ok(p)
    } else {
        Err(Error::NonFiniteLagrangian)
    }
}

/// `d^2 L / dv^A dv^B` from differences of the momenta.
fn velocity_hessian(model: &LagrangianModel, q: &[f64], v: &[f64], t: f64) -> Result<Vec<Vec<f64>>> {
    let dim = model.dim;
    let mut hess = vec![vec![0.0; dim]; dim];
    let mut work = v.to_vec();
    for b in 0..dim {
        let h = model.velocity_step(v, b, 10.0 * LEGENDRE_STEP);
        let mut at = |x: f64| -> Result<Vec<f64>> {
            work[b] = x;
            legendre_momenta(model, q, &work, t)
        };
        let p1 = at(v[b] + h)?;
        let m1 = at(v[b] - h)?;
        let p2 = at(v[b] + 2.0 * h)?;
        let m2 = at(v[b] - 2.0 * h)?;
        work[b] = v[b];
        for a in 0..dim {
            hess[a][b] = (8.0 * (p1[a] - m1[a]) - (p2[a] - m2[a])) / (12.0 * h);
        }
    }
    Ok(hess)
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if !(a[pivot][col].abs() > 1e-14 * scale) {
            return Err(Error::SingularHessian);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for (offset, row) in rest.iter_mut().enumerate() {
            let f = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[col + 1 + offset] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_TOL: f64 = 1e-12;
const NEWTON_ACCEPT: f64 = 1e-10;

/// Solves `dL/dv (q, v, t) = p` for `v` by damped Newton iteration.
///
/// Starts from `H0^{-1} p` with `H0` the velocity Hessian at `v = 0`. Steps
/// are halved while they leave the speed limit or hit a non-finite
/// Lagrangian.
pub fn invert_velocities(model: &LagrangianModel, q: &[f64], p: &[f64], t: f64) -> Result<Vec<f64>> {
    model.check_dim(q)?;
    model.check_dim(p)?;
    let dim = model.dim;
    let p_scale = 1.0 + max_abs(p);
    let zero = vec![0.0; dim];

    let mut v = solve(velocity_hessian(model, q, &zero, t)?, p.to_vec())?;
    while !model.inside(&v) {
        v.iter_mut().for_each(|x| *x *= 0.5);
    }

    let residual = |v: &[f64]| -> Result<Vec<f64>> {
        let pv = legendre_momenta(model, q, v, t)?;
        Ok(pv.iter().zip(p).map(|(a, b)| a - b).collect())
    };

    let mut f = residual(&v)?;
    let mut iterations = 0;
    while iterations < NEWTON_MAX_ITER {
        if max_abs(&f) <= NEWTON_TOL * p_scale {
            return Ok(v);
        }
        iterations += 1;
        let step = solve(velocity_hessian(model, q, &v, t)?, f.clone())?;
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let candidate: Vec<f64> = v.iter().zip(&step).map(|(x, d)| x - lambda * d).collect();
            if model.inside(&candidate) {
                if let Ok(fc) = residual(&candidate) {
                    accepted = Some((candidate, fc));
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some((next, fc)) = accepted else { break };
        let moved = max_abs(&step) * lambda;
        v = next;
        f = fc;
        if moved <= 1e-15 * (1.0 + max_abs(&v)) {
            break;
        }
    }
    let r = max_abs(&f);
    if r < NEWTON_ACCEPT * p_scale {
        Ok(v)
    } else {
        Err(Error::NoConvergence { iterations, residual: r })
    }
}

/// `H(q, p, t) = p v - L(q, v, t)` with `v` from [`invert_velocities`].
pub fn physical_hamiltonian(model: &LagrangianModel, q: &[f64], p: &[f64], t: f64) -> Result<f64> {
    let v = invert_velocities(model, q, p, t)?;
    Ok(dot(p, &v) - model.lagrangian(q, &v, t))
}
