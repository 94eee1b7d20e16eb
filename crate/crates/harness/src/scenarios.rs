use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::num::NonZeroUsize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reparam_core::equivalence::{density_from_phi, psi_from_phi, verify_equivalence};
use reparam_core::evolution::{
    evolve_klein_gordon, evolve_schrodinger, evolve_sqrt_schrodinger, kg_energy, mode_frequency,
    nonrel_limit_residual, pt_reality_residual, EvolutionParams, KleinGordonState, SchrodingerState,
};
use reparam_core::mechanics::{
    canonical_hamiltonian_ri, integrate_physical, lift_to_ri, mass_shell_residual, poisson_bracket,
    reconstruct_physical, relativistic_momenta, GaugeFunction, LagrangianModel, PhaseState,
};
use reparam_core::spectral::{norm, uncertainty_product, ComplexField, GridSpec, PhysicalConstants, RealField};
use reparam_core::Complex64;

use crate::config::{ExperimentConfig, InitialCondition, ModelConfig, ModelKind, PotentialConfig, Scenario};
use crate::io::{complex_table, read_custom_file, real_table, CustomField, Table};
use crate::HarnessError;

/// Environment variable capping the worker threads of parameter scans.
pub const THREADS_ENV: &str = "REPARAM_QM_THREADS";

#[derive(Debug, Default)]
pub(crate) struct ScenarioOutput {
    pub metrics: BTreeMap<String, f64>,
    pub series: BTreeMap<String, Vec<f64>>,
    /// Written as `snapshot_<i>.csv`.
    pub snapshots: Vec<Table>,
    /// Written as `metrics.csv`; defaults to the series.
    pub table: Option<Table>,
}

impl ScenarioOutput {
    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    fn series(&mut self, name: &str, values: Vec<f64>) {
        self.series.insert(name.to_string(), values);
    }
}

type Outcome = Result<ScenarioOutput, HarnessError>;

pub(crate) fn execute(config: &ExperimentConfig) -> Outcome {
    let grid = GridSpec::new(config.grid.n, config.grid.length)?;
    let k = &config.constants;
    let constants = PhysicalConstants::new(k.hbar, k.c, k.mass)?;
    let run = Run { config, grid, constants };
    match config.scenario {
        Scenario::EvolveNonrel => run.evolve_nonrel(),
        Scenario::EvolveSqrt => run.evolve_sqrt(),
        Scenario::EvolveKg => run.evolve_kg(),
        Scenario::KgEquivalence => run.kg_equivalence(),
        Scenario::NonrelLimitScan => run.nonrel_limit_scan(),
        Scenario::RiConstraint => run.ri_constraint(),
        Scenario::GaugeInvariance => run.gauge_invariance(),
        Scenario::Uncertainty => run.uncertainty(),
    }
}

struct Run<'a> {
    config: &'a ExperimentConfig,
    grid: GridSpec,
    constants: PhysicalConstants,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real field on modes `|j| <= max_mode` with amplitudes decaying as `1/(1+j)`.
fn band_limited(grid: GridSpec, max_mode: usize, rng: &mut impl Rng) -> RealField {
    let k0 = TAU / grid.length();
    let terms: Vec<(f64, f64, f64)> = (0..=max_mode)
        .map(|j| {
            let decay = 1.0 / (1.0 + j as f64);
            (j as f64 * k0, rng.gen_range(-1.0..1.0) * decay, rng.gen_range(-1.0..1.0) * decay)
        })
        .collect();
    RealField::from_fn(grid, |x| terms.iter().map(|&(k, a, b)| a * (k * x).cos() + b * (k * x).sin()).sum())
        .expect("band-limited samples are finite")
}

fn max_rel_drift(values: &[f64]) -> f64 {
    let first = values[0];
    values
        .iter()
        .map(|v| (v - first).abs() / first.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

impl Run<'_> {
    fn initial(&self) -> &InitialCondition {
        self.config.initial.as_ref().expect("validated")
    }

    fn snapshot_count(&self) -> usize {
        self.config.time.steps / self.config.time.snapshot_stride
    }

    fn stride_params(&self) -> Result<EvolutionParams, HarnessError> {
        let t = &self.config.time;
        Ok(EvolutionParams::new(t.dt, t.snapshot_stride, self.constants)?)
    }

    fn wave_function(&self) -> Result<ComplexField, HarnessError> {
        let g = self.grid;
        Ok(match self.initial() {
            InitialCondition::Gaussian { center, width, momentum } => {
                let hbar = self.constants.hbar();
                let f = ComplexField::from_fn(g, |x| {
                    let d = x - center;
                    Complex64::from_polar((-d * d / (4.0 * width * width)).exp(), momentum * x / hbar)
                })?;
                let n = norm(&f);
                f.scale(Complex64::new(1.0 / n, 0.0))
            }
            InitialCondition::PlaneWave { mode } => ComplexField::plane_wave(g, *mode),
            InitialCondition::CustomFile { path } => match read_custom_file(path, g)? {
                CustomField::Complex(f) => f,
                CustomField::Real(f) => f.to_complex(),
            },
            InitialCondition::RandomBandLimited { max_mode } => {
                let mut r = rng(self.config.seed);
                let re = band_limited(g, *max_mode, &mut r);
                let im = band_limited(g, *max_mode, &mut r);
                ComplexField::from_real_imag(&re, &im)?
            }
        })
    }

    fn kg_field(&self) -> Result<KleinGordonState, HarnessError> {
        let g = self.grid;
        let (phi, phi_dot) = match self.initial() {
            InitialCondition::Gaussian { center, width, .. } => (
                RealField::from_fn(g, |x| (-(x - center).powi(2) / (4.0 * width * width)).exp())?,
                RealField::zeros(g),
            ),
            InitialCondition::PlaneWave { mode } => {
                let k = TAU * *mode as f64 / g.length();
                let w = mode_frequency(k, &self.constants);
                (RealField::from_fn(g, |x| (k * x).cos())?, RealField::from_fn(g, |x| w * (k * x).sin())?)
            }
            InitialCondition::CustomFile { path } => match read_custom_file(path, g)? {
                CustomField::Complex(f) => (f.real_part(), f.imag_part()),
                CustomField::Real(f) => (f, RealField::zeros(g)),
            },
            InitialCondition::RandomBandLimited { max_mode } => {
                let mut r = rng(self.config.seed);
                (band_limited(g, *max_mode, &mut r), band_limited(g, *max_mode, &mut r))
            }
        };
        Ok(KleinGordonState::new(phi, phi_dot, 0.0)?)
    }

    fn potential(&self) -> Result<Option<RealField>, HarnessError> {
        let (g, m) = (self.grid, self.constants.mass());
        Ok(match &self.config.potential {
            None => None,
            Some(PotentialConfig::Harmonic { omega, center }) => {
                let c = center.unwrap_or(g.length() / 2.0);
                Some(RealField::from_fn(g, |x| 0.5 * m * omega * omega * (x - c).powi(2))?)
            }
            Some(PotentialConfig::Cosine { depth }) => {
                Some(RealField::from_fn(g, |x| depth * (TAU * x / g.length()).cos())?)
            }
        })
    }

    fn nonrel_trajectory(&self, psi: ComplexField, params: &EvolutionParams) -> Result<Vec<SchrodingerState>, HarnessError> {
        let mut states = vec![SchrodingerState::new(psi, 0.0)];
        for _ in 0..self.snapshot_count() {
            let next = evolve_schrodinger(states.last().unwrap(), params)?;
            states.push(next);
        }
        Ok(states)
    }

    fn evolve_nonrel(&self) -> Outcome {
        let mut params = self.stride_params()?;
        if let Some(v) = self.potential()? {
            params = params.with_potential(v);
        }
        let psi0 = self.wave_function()?;
        let states = self.nonrel_trajectory(psi0.clone(), &params)?;
        let mut out = schrodinger_output(&states);

        if let Some(conv) = &self.config.convergence {
            let t = &self.config.time;
            let finals = (0..conv.refinements + 2)
                .map(|i| {
                    let scale = 1usize << i;
                    let mut p = EvolutionParams::new(t.dt / scale as f64, t.steps * scale, self.constants)?;
                    if let Some(v) = params.potential() {
                        p = p.with_potential(v.clone());
                    }
                    Ok(evolve_schrodinger(&SchrodingerState::new(psi0.clone(), 0.0), &p)?.psi)
                })
                .collect::<Result<Vec<_>, HarnessError>>()?;
            let errors = finals
                .windows(2)
                .map(|w| Ok(norm(&w[0].sub(&w[1])?)))
                .collect::<Result<Vec<f64>, HarnessError>>()?;
            for (i, e) in errors.iter().enumerate() {
                out.metric(&format!("convergence_error_{i}"), *e);
            }
            for (i, w) in errors.windows(2).enumerate() {
                out.metric(&format!("convergence_ratio_{i}"), w[0] / w[1]);
            }
        }
        Ok(out)
    }

    fn evolve_sqrt(&self) -> Outcome {
        let params = self.stride_params()?;
        let psi0 = self.wave_function()?;
        let mut states = vec![SchrodingerState::new(psi0.clone(), 0.0)];
        for _ in 0..self.snapshot_count() {
            let next = evolve_sqrt_schrodinger(states.last().unwrap(), &params)?;
            states.push(next);
        }
        let mut out = schrodinger_output(&states);
        if states.len() >= 3 {
            out.metric("pt_reality_residual", pt_reality_residual(&states, self.constants.hbar())?);
        }
        if let InitialCondition::PlaneWave { mode } = self.initial() {
            let k = TAU * *mode as f64 / self.grid.length();
            let w = mode_frequency(k, &self.constants);
            let mut worst = 0.0f64;
            for s in &states {
                let exact = psi0.scale(Complex64::from_polar(1.0, -w * s.time));
                worst = worst.max(s.psi.max_abs_diff(&exact)?);
            }
            out.metric("plane_wave_error", worst);
        }
        Ok(out)
    }

    fn evolve_kg(&self) -> Outcome {
        let params = self.stride_params()?;
        let k = &self.constants;
        let mut state = self.kg_field()?;
        let mut out = ScenarioOutput::default();
        let (mut times, mut energies, mut probabilities) = (vec![], vec![], vec![]);
        for i in 0..=self.snapshot_count() {
            if i > 0 {
                state = evolve_klein_gordon(&state, &params)?;
            }
            times.push(state.time());
            energies.push(kg_energy(&state, k));
            probabilities.push(norm(&psi_from_phi(&state, k)).powi(2));
            out.snapshots.push(real_table(state.phi()));
        }
        let mismatch = energies
            .iter()
            .zip(&probabilities)
            .map(|(e, p)| (e - p).abs() / e.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        out.metric("max_energy_drift", max_rel_drift(&energies));
        out.metric("max_energy_probability_mismatch", mismatch);
        out.metric("final_energy", *energies.last().unwrap());
        out.series("time", times);
        out.series("energy", energies);
        out.series("probability", probabilities);
        Ok(out)
    }

    fn kg_equivalence(&self) -> Outcome {
        let t = &self.config.time;
        let k = &self.constants;
        let phi0 = self.kg_field()?;
        let total = t.dt * t.steps as f64;
        let report = verify_equivalence(&phi0, total, &EvolutionParams::new(t.dt, 1, *k)?)?;
        let mut out = ScenarioOutput::default();
        for (name, value) in report.entries() {
            out.metric(name, value);
        }

        let params = self.stride_params()?;
        let mut state = phi0;
        let (mut times, mut density) = (vec![], vec![]);
        for i in 0..=self.snapshot_count() {
            if i > 0 {
                state = evolve_klein_gordon(&state, &params)?;
            }
            let psi = psi_from_phi(&state, k);
            times.push(state.time());
            density.push(psi.density().max_abs_diff(&density_from_phi(&state, k))?);
            out.snapshots.push(complex_table(&psi));
        }
        out.metric("max_snapshot_density_residual", density.iter().cloned().fold(0.0, f64::max));
        out.series("time", times);
        out.series("density_residual", density);
        Ok(out)
    }

    fn nonrel_limit_scan(&self) -> Outcome {
        let scan = self.config.scan.as_ref().expect("validated");
        let (hbar, m) = (self.constants.hbar(), self.constants.mass());
        let grid = self.grid;
        let k = TAU * scan.mode as f64 / grid.length();
        let residuals = parallel_map(&scan.c_values, |&c| {
            let constants = PhysicalConstants::new(hbar, c, m)?;
            Ok(nonrel_limit_residual(&grid, &constants, scan.mode, scan.elapsed)?)
        })?;

        let mut out = ScenarioOutput::default();
        let mut table = Table::new(&["c", "residual", "leading_order"]);
        for (&c, &r) in scan.c_values.iter().zip(&residuals) {
            let leading = hbar.powi(3) * k.powi(4) / (8.0 * m.powi(3) * c * c);
            table.push(vec![c, r, leading]);
            out.metric(&format!("residual_c{c}"), r);
            out.metric(&format!("leading_order_ratio_c{c}"), r / leading);
        }
        let xs: Vec<f64> = scan.c_values.iter().map(|c| c.ln()).collect();
        let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
        out.metric("log_log_slope", slope(&xs, &ys));
        out.table = Some(table);
        Ok(out)
    }

    fn model(&self) -> (LagrangianModel, &ModelConfig) {
        let cfg = self.config.model.as_ref().expect("validated");
        let (m, w) = (self.constants.mass(), cfg.omega);
        let model = match cfg.kind {
            ModelKind::Free => LagrangianModel::free_particle(m, 1),
            ModelKind::Harmonic => LagrangianModel::harmonic(m, w),
            ModelKind::Relativistic => LagrangianModel::relativistic(&self.constants, 1),
            ModelKind::RelativisticOscillator => {
                let k = m * w * w;
                LagrangianModel::relativistic_with_potential(&self.constants, 1, move |q, _| 0.5 * k * q[0] * q[0])
            }
        };
        (model, cfg)
    }

    fn ri_constraint(&self) -> Outcome {
        let (model, cfg) = self.model();
        let t = &self.config.time;
        let traj = integrate_physical(&model, &[cfg.q0], &[cfg.v0], 0.0, t.dt * t.steps as f64, t.dt)?;
        let mut out = ScenarioOutput::default();
        let mut table = Table::new(&["t", "q", "p", "p_t", "constraint"]);
        let mut worst = 0.0f64;
        for (i, s) in traj.samples.iter().enumerate() {
            let c = s.p_t + reparam_core::mechanics::physical_hamiltonian(&model, &s.q, &s.p, s.t)?;
            worst = worst.max(c.abs());
            if i % t.snapshot_stride == 0 {
                table.push(vec![s.t, s.q[0], s.p[0], s.p_t, c]);
            }
        }
        let p_t0 = traj.samples[0].p_t;
        let pt_variation = traj.samples.iter().map(|s| (s.p_t - p_t0).abs()).fold(0.0, f64::max);
        out.metric("max_constraint", worst);
        out.metric("p_t_variation", pt_variation);
        out.metric("max_factorization_residual", self.factorization(&model, cfg)?);
        out.metric("max_bracket_error", bracket_error(&traj.samples[traj.samples.len() / 2]));
        if matches!(cfg.kind, ModelKind::Relativistic | ModelKind::RelativisticOscillator) {
            let mut r = rng(self.config.seed ^ 0x5eed);
            let c = self.constants.c();
            let mut shell = 0.0f64;
            for _ in 0..cfg.samples {
                let v = r.gen_range(-0.99..0.99) * c;
                shell = shell.max(mass_shell_residual(&relativistic_momenta(&[v], &self.constants)?, &self.constants));
            }
            out.metric("max_mass_shell_residual", shell);
        }
        out.table = Some(table);
        Ok(out)
    }

    fn factorization(&self, model: &LagrangianModel, cfg: &ModelConfig) -> Result<f64, HarnessError> {
        let mut r = rng(self.config.seed);
        let vmax = model.speed_limit().map_or(2.0, |c| 0.95 * c);
        let mut worst = 0.0f64;
        for _ in 0..cfg.samples {
            let q = r.gen_range(-2.0..2.0);
            let v = r.gen_range(-vmax..vmax);
            let t = r.gen_range(-1.0..1.0);
            let tdot = r.gen_range(0.1..3.0);
            let p_t = r.gen_range(-5.0..5.0);
            let h = canonical_hamiltonian_ri(model, &[q], &[v * tdot], t, tdot, Some(p_t))?;
            worst = worst.max(h.factorization_residual);
        }
        Ok(worst)
    }

    fn gauge_invariance(&self) -> Outcome {
        let (model, cfg) = self.model();
        let t = &self.config.time;
        let end = t.dt * t.steps as f64;
        let traj = integrate_physical(&model, &[cfg.q0], &[cfg.v0], 0.0, end, t.dt)?;
        let count = t.steps + 1;
        let cubic = lift_to_ri(&traj, &GaugeFunction::cubic(), 0.1, end.cbrt(), count)?;
        let exp = lift_to_ri(&traj, &GaugeFunction::exp_minus_one(), 0.0, end.ln_1p(), count)?;
        let (a, b) = (reconstruct_physical(&cubic)?, reconstruct_physical(&exp)?);

        let mut out = ScenarioOutput::default();
        let mut table = Table::new(&["t", "q_cubic", "q_exp"]);
        let lo = a.times()[0].max(b.times()[0]);
        let hi = end;
        let probes = t.steps / t.snapshot_stride;
        let (mut gauge, mut free) = (0.0f64, 0.0f64);
        for i in 0..=probes {
            let time = lo + (hi - lo) * i as f64 / probes as f64;
            let (qa, qb) = (a.position(time)?[0], b.position(time)?[0]);
            gauge = gauge.max((qa - qb).abs());
            if cfg.kind == ModelKind::Free {
                let exact = cfg.v0 * time + cfg.q0;
                free = free.max((qa - exact).abs()).max((qb - exact).abs());
            }
            table.push(vec![time, qa, qb]);
        }
        out.metric("max_gauge_disagreement", gauge);
        out.metric("max_constraint_cubic", cubic.max_constraint(&model)?);
        out.metric("max_constraint_exp", exp.max_constraint(&model)?);
        if cfg.kind == ModelKind::Free {
            out.metric("max_free_particle_deviation", free);
        }
        out.table = Some(table);
        Ok(out)
    }

    fn uncertainty(&self) -> Outcome {
        let mut params = self.stride_params()?;
        if let Some(v) = self.potential()? {
            params = params.with_potential(v);
        }
        let psi = self.wave_function()?;
        let psi = psi.scale(Complex64::new(1.0 / norm(&psi), 0.0));
        let states = self.nonrel_trajectory(psi, &params)?;
        let mut out = ScenarioOutput::default();
        let (mut dx, mut dp, mut ratio, mut times) = (vec![], vec![], vec![], vec![]);
        for s in &states {
            let u = uncertainty_product(&s.psi, &self.constants)?;
            times.push(s.time);
            dx.push(u.delta_x);
            dp.push(u.delta_p);
            ratio.push(u.product() / u.bound);
            out.snapshots.push(complex_table(&s.psi));
        }
        out.metric("initial_product_over_bound", ratio[0]);
        out.metric("min_product_over_bound", ratio.iter().cloned().fold(f64::INFINITY, f64::min));
        out.metric("random_min_product_over_bound", self.random_uncertainty(20)?);
        out.series("time", times);
        out.series("delta_x", dx);
        out.series("delta_p", dp);
        out.series("product_over_bound", ratio);
        Ok(out)
    }

    /// Smallest `dx dp / (hbar/2)` over random superpositions of localized
    /// packets near the middle of the box.
    fn random_uncertainty(&self, count: usize) -> Result<f64, HarnessError> {
        let g = self.grid;
        let l = g.length();
        let hbar = self.constants.hbar();
        let mut r = rng(self.config.seed);
        let mut worst = f64::INFINITY;
        for _ in 0..count {
            let mut f = ComplexField::zeros(g);
            for _ in 0..r.gen_range(2..=3) {
                let center = r.gen_range(0.4 * l..0.6 * l);
                let width = r.gen_range(0.015 * l..0.05 * l);
                let momentum = r.gen_range(-3.0..3.0) * hbar / width;
                let weight = Complex64::from_polar(r.gen_range(0.2..1.0), r.gen_range(0.0..TAU));
                let packet = ComplexField::from_fn(g, |x| {
                    let d = x - center;
                    Complex64::from_polar((-d * d / (4.0 * width * width)).exp(), momentum * x / hbar)
                })?;
                f = f.add(&packet.scale(weight))?;
            }
            let f = f.scale(Complex64::new(1.0 / norm(&f), 0.0));
            let u = uncertainty_product(&f, &self.constants)?;
            worst = worst.min(u.product() / u.bound);
        }
        Ok(worst)
    }
}

fn schrodinger_output(states: &[SchrodingerState]) -> ScenarioOutput {
    let mut out = ScenarioOutput::default();
    let norms: Vec<f64> = states.iter().map(|s| norm(&s.psi)).collect();
    out.metric("max_norm_drift", max_rel_drift(&norms));
    out.metric("final_norm", *norms.last().unwrap());
    out.metric("final_time", states.last().unwrap().time);
    out.series("time", states.iter().map(|s| s.time).collect());
    out.series("norm", norms);
    out.snapshots = states.iter().map(|s| complex_table(&s.psi)).collect();
    out
}

/// Largest deviation of the canonical brackets from `0`/`1` at `state`.
fn bracket_error(state: &PhaseState) -> f64 {
    let q = |s: &PhaseState| s.q[0];
    let p = |s: &PhaseState| s.p[0];
    let t = |s: &PhaseState| s.t;
    let pt = |s: &PhaseState| s.p_t;
    [
        poisson_bracket(&q, &p, state) - 1.0,
        poisson_bracket(&t, &pt, state) - 1.0,
        poisson_bracket(&q, &pt, state),
        poisson_bracket(&t, &p, state),
        poisson_bracket(&q, &t, state),
        poisson_bracket(&p, &pt, state),
    ]
    .iter()
    .fold(0.0f64, |m, e| m.max(e.abs()))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

pub(crate) fn worker_threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get))
}

/// Maps `f` over `items` on scoped threads, keeping input order.
fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<R, HarnessError> + Sync,
) -> Result<Vec<R>, HarnessError> {
    let threads = worker_threads().min(items.len()).max(1);
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Result<Vec<R>, _>>()))
            .collect();
        let mut out = Vec::with_capacity(items.len());
        for h in handles {
            out.extend(h.join().expect("scan worker panicked")?);
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let xs: Vec<f64> = [1.0f64, 2.0, 4.0].iter().map(|x| x.ln()).collect();
        let ys: Vec<f64> = [1.0f64, 0.25, 0.0625].iter().map(|y| y.ln()).collect();
        assert!((slope(&xs, &ys) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_map_keeps_order() {
        let items: Vec<u32> = (0..37).collect();
        let out = parallel_map(&items, |x| Ok(x * 2)).unwrap();
        assert_eq!(out, items.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
