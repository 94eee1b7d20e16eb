use alloc::vec::Vec;

use super::PhaseState;
use crate::diff::{central4, step_for, PHASE_SPACE_STEP};

/// Partial derivatives of a phase-space function.
struct Gradient {
    q: Vec<f64>,
    p: Vec<f64>,
    t: f64,
    p_t: f64,
}

fn gradient(f: &dyn Fn(&PhaseState) -> f64, state: &PhaseState) -> Gradient {
    let mut work = state.clone();
    let mut partial = |set: &dyn Fn(&mut PhaseState, f64), x: f64| {
        let d = central4(
            |v| {
                set(&mut work, v);
                f(&work)
            },
            x,
            step_for(x, PHASE_SPACE_STEP),
        );
        set(&mut work, x);
        d
    };
    let q = (0..state.q.len())
        .map(|a| partial(&|s, v| s.q[a] = v, state.q[a]))
        .collect();
    let p = (0..state.p.len())
        .map(|a| partial(&|s, v| s.p[a] = v, state.p[a]))
        .collect();
    let t = partial(&|s, v| s.t = v, state.t);
    let p_t = partial(&|s, v| s.p_t = v, state.p_t);
    Gradient { q, p, t, p_t }
}

/// `{f, g}` on the extended phase space `(q, p, t, p_t)`:
/// `sum_A (f_q g_p - f_p g_q) + f_t g_pt - f_pt g_t`.
pub fn poisson_bracket(
    f: &dyn Fn(&PhaseState) -> f64,
    g: &dyn Fn(&PhaseState) -> f64,
    state: &PhaseState,
) -> f64 {
    let df = gradient(f, state);
    let dg = gradient(g, state);
    let spatial: f64 = (0..state.q.len())
        .map(|a| df.q[a] * dg.p[a] - df.p[a] * dg.q[a])
        .sum();
    spatial + df.t * dg.p_t - df.p_t * dg.t
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn point() -> PhaseState {
        PhaseState {
            q: vec![0.3, -1.2],
            p: vec![0.8, 2.5],
            t: 4.0,
            p_t: -3.1,
            tau: 0.0,
        }
    }

    #[test]
    fn canonical_pairs() {
        let s = point();
        let x1 = |s: &PhaseState| s.q[0];
        let p1 = |s: &PhaseState| s.p[0];
        let p2 = |s: &PhaseState| s.p[1];
        let t = |s: &PhaseState| s.t;
        let pt = |s: &PhaseState| s.p_t;
        assert!((poisson_bracket(&x1, &p1, &s) - 1.0).abs() < 1e-8);
        assert!(poisson_bracket(&x1, &p2, &s).abs() < 1e-8);
        assert!((poisson_bracket(&t, &pt, &s) - 1.0).abs() < 1e-8);
        assert!(poisson_bracket(&t, &p1, &s).abs() < 1e-8);
    }

    #[test]
    fn bracket_with_hamiltonian_gives_velocity() {
        // {x, p^2/2} = p
        let s = point();
        let x2 = |s: &PhaseState| s.q[1];
        let h = |s: &PhaseState| 0.5 * (s.p[0] * s.p[0] + s.p[1] * s.p[1]);
        assert!((poisson_bracket(&x2, &h, &s) - 2.5).abs() < 1e-8);
    }
}
