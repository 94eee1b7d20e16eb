//! Experiment configuration, read from TOML.
//!
//! ```toml
//! scenario = "evolve-sqrt"
//! seed = 7
//!
//! [grid]
//! n = 256
//! length = 6.283185307179586
//!
//! [constants]
//! hbar = 1.0
//! c = 1.0
//! mass = 1.0
//!
//! [initial]
//! kind = "plane-wave"
//! mode = 1
//!
//! [time]
//! dt = 0.1
//! steps = 100
//! snapshot_stride = 10
//!
//! [output]
//! directory = "out"
//! formats = ["csv", "json"]
//! ```
//!
//! Unknown keys are rejected. See the README for the optional `potential`,
//! `scan`, `model` and `convergence` sections.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    EvolveNonrel,
    EvolveSqrt,
    EvolveKg,
    KgEquivalence,
    NonrelLimitScan,
    RiConstraint,
    GaugeInvariance,
    Uncertainty,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::EvolveNonrel,
        Scenario::EvolveSqrt,
        Scenario::EvolveKg,
        Scenario::KgEquivalence,
        Scenario::NonrelLimitScan,
        Scenario::RiConstraint,
        Scenario::GaugeInvariance,
        Scenario::Uncertainty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::EvolveNonrel => "evolve-nonrel",
            Scenario::EvolveSqrt => "evolve-sqrt",
            Scenario::EvolveKg => "evolve-kg",
            Scenario::KgEquivalence => "kg-equivalence",
            Scenario::NonrelLimitScan => "nonrel-limit-scan",
            Scenario::RiConstraint => "ri-constraint",
            Scenario::GaugeInvariance => "gauge-invariance",
            Scenario::Uncertainty => "uncertainty",
        }
    }

    fn needs_field(self) -> bool {
        matches!(
            self,
            Scenario::EvolveNonrel
                | Scenario::EvolveSqrt
                | Scenario::EvolveKg
                | Scenario::KgEquivalence
                | Scenario::Uncertainty
        )
    }

    fn needs_model(self) -> bool {
        matches!(self, Scenario::RiConstraint | Scenario::GaugeInvariance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub hbar: f64,
    pub c: f64,
    pub mass: f64,
}

/// Initial condition. For Klein-Gordon scenarios it describes `phi`:
/// a Gaussian starts at rest, a plane wave is the travelling solution
/// `cos(k x - w t)`, and `random-band-limited` draws both `phi` and
/// `phi_dot` from `seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialCondition {
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default)]
        momentum: f64,
    },
    PlaneWave {
        mode: i64,
    },
    /// CSV with header `x,re,im` (complex) or `x,value` (real), one row per
    /// grid point.
    CustomFile {
        path: PathBuf,
    },
    RandomBandLimited {
        max_mode: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub steps: usize,
    pub snapshot_stride: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv, Format::Json]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialConfig {
    /// `m w^2 (x - center)^2 / 2`; `center` defaults to the grid midpoint.
    Harmonic {
        omega: f64,
        #[serde(default)]
        center: Option<f64>,
    },
    /// `depth * cos(2 pi x / L)`.
    Cosine {
        depth: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub c_values: Vec<f64>,
    #[serde(default = "default_mode")]
    pub mode: i64,
    /// Evolution time per point.
    #[serde(default = "default_elapsed")]
    pub elapsed: f64,
}

fn default_mode() -> i64 {
    1
}

fn default_elapsed() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Free,
    Harmonic,
    Relativistic,
    RelativisticOscillator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub q0: f64,
    pub v0: f64,
    /// Oscillator frequency; ignored by the free models.
    #[serde(default = "default_omega")]
    pub omega: f64,
    /// Random off-shell points for the factorization check.
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_omega() -> f64 {
    1.0
}

fn default_samples() -> usize {
    100
}

/// Repeats the run with `dt / 2^i` for `i < refinements + 1` and reports
/// successive error ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub refinements: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub seed: u64,
    pub grid: GridConfig,
    pub constants: ConstantsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialCondition>,
    pub time: TimeConfig,
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceConfig>,
}

/// Largest seed a TOML file can hold.
pub const MAX_SEED: u64 = i64::MAX as u64;

fn invalid(field: &str, constraint: impl Into<String>) -> HarnessError {
    HarnessError::Invalid {
        field: field.to_string(),
        constraint: constraint.into(),
    }
}

fn positive(field: &str, value: f64) -> Result<(), HarnessError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and > 0, got {value}")))
    }
}

impl ExperimentConfig {
    /// Parses TOML and validates everything except the output directory.
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let config: Self = toml::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut config = Self::from_toml(&text)?;
        // custom files are relative to the config file
        if let Some(InitialCondition::CustomFile { path: file }) = &mut config.initial {
            if file.is_relative() {
                if let Some(dir) = path.parent() {
                    *file = dir.join(&*file);
                }
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String, HarnessError> {
        toml::to_string(self).map_err(|e| HarnessError::Parse(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        // TOML integers are signed
        if self.seed > MAX_SEED {
            return Err(invalid("seed", format!("must be <= {MAX_SEED}")));
        }
        let g = &self.grid;
        if g.n < 8 || !g.n.is_power_of_two() {
            return Err(invalid("grid.n", format!("must be a power of two >= 8, got {}", g.n)));
        }
        positive("grid.length", g.length)?;
        positive("constants.hbar", self.constants.hbar)?;
        positive("constants.c", self.constants.c)?;
        positive("constants.mass", self.constants.mass)?;

        let t = &self.time;
        positive("time.dt", t.dt)?;
        if t.steps == 0 {
            return Err(invalid("time.steps", "must be >= 1"));
        }
        if t.snapshot_stride == 0 || !t.steps.is_multiple_of(t.snapshot_stride) {
            return Err(invalid(
                "time.snapshot_stride",
                format!(
                    "must be >= 1 and divide time.steps ({} is not a divisor of {})",
                    t.snapshot_stride, t.steps
                ),
            ));
        }
        if self.output.formats.is_empty() {
            return Err(invalid("output.formats", "must list at least one of csv, json"));
        }

        if self.scenario.needs_field() {
            match &self.initial {
                None => return Err(invalid("initial", format!("required by scenario {}", self.scenario.name()))),
                Some(InitialCondition::Gaussian { width, center, momentum }) => {
                    positive("initial.width", *width)?;
                    if !center.is_finite() || !momentum.is_finite() {
                        return Err(invalid("initial.center", "center and momentum must be finite"));
                    }
                }
                Some(InitialCondition::PlaneWave { mode }) => {
                    if mode.unsigned_abs() as usize > g.n / 2 {
                        return Err(invalid("initial.mode", format!("|mode| must be <= n/2 = {}", g.n / 2)));
                    }
                }
                Some(InitialCondition::RandomBandLimited { max_mode }) => {
                    if *max_mode >= g.n / 2 {
                        return Err(invalid("initial.max_mode", format!("must be < n/2 = {}", g.n / 2)));
                    }
                }
                Some(InitialCondition::CustomFile { .. }) => {}
            }
        }
        if self.scenario == Scenario::Uncertainty
            && !matches!(self.initial, Some(InitialCondition::Gaussian { .. }) | Some(InitialCondition::CustomFile { .. }))
        {
            return Err(invalid("initial.kind", "uncertainty needs a localized state (gaussian or custom-file)"));
        }
        if self.scenario == Scenario::NonrelLimitScan {
            let scan = self
                .scan
                .as_ref()
                .ok_or_else(|| invalid("scan", "required by scenario nonrel-limit-scan"))?;
            if scan.c_values.len() < 2 {
                return Err(invalid("scan.c_values", "needs at least two speeds"));
            }
            for &c in &scan.c_values {
                positive("scan.c_values", c)?;
            }
            positive("scan.elapsed", scan.elapsed)?;
        }
        if self.scenario.needs_model() {
            let model = self
                .model
                .as_ref()
                .ok_or_else(|| invalid("model", format!("required by scenario {}", self.scenario.name())))?;
            positive("model.omega", model.omega)?;
            if matches!(model.kind, ModelKind::Relativistic | ModelKind::RelativisticOscillator)
                && !(model.v0.abs() < self.constants.c)
            {
                return Err(invalid("model.v0", "must satisfy |v0| < constants.c"));
            }
        }
        if self.scenario == Scenario::GaugeInvariance && !(self.time.dt * self.time.steps as f64 >= 1.0) {
            return Err(invalid("time.steps", "gauge-invariance needs dt * steps >= 1"));
        }
        match &self.potential {
            Some(PotentialConfig::Harmonic { omega, center }) => {
                positive("potential.omega", *omega)?;
                if center.is_some_and(|c| !c.is_finite()) {
                    return Err(invalid("potential.center", "must be finite"));
                }
            }
            Some(PotentialConfig::Cosine { depth }) if !depth.is_finite() => {
                return Err(invalid("potential.depth", "must be finite"));
            }
            _ => {}
        }
        if self.potential.is_some() && !matches!(self.scenario, Scenario::EvolveNonrel | Scenario::Uncertainty) {
            return Err(invalid("potential", "only evolve-nonrel and uncertainty accept a potential"));
        }
        if let Some(conv) = &self.convergence {
            if self.scenario != Scenario::EvolveNonrel {
                return Err(invalid("convergence", "only evolve-nonrel supports convergence runs"));
            }
            if !(1..=6).contains(&conv.refinements) {
                return Err(invalid("convergence.refinements", "must be in 1..=6"));
            }
        }
        Ok(())
    }

    /// Creates the output directory and checks it accepts files.
    pub fn prepare_output(&self) -> Result<(), HarnessError> {
        let dir = &self.output.directory;
        let io = |e: std::io::Error| HarnessError::Invalid {
            field: "output.directory".to_string(),
            constraint: format!("{} is not writable: {e}", dir.display()),
        };
        fs::create_dir_all(dir).map_err(io)?;
        let probe = dir.join(".write-probe");
        fs::write(&probe, b"").map_err(io)?;
        fs::remove_file(&probe).map_err(io)?;
        Ok(())
    }
}
