//! Built-in configurations, one per headline check of the library.

use crate::config::ExperimentConfig;
use crate::HarnessError;

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub toml: &'static str,
}

macro_rules! preset {
    ($name:literal, $summary:literal) => {
        Preset {
            name: $name,
            summary: $summary,
            toml: include_str!(concat!("../presets/", $name, ".toml")),
        }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("dispersion", "square-root propagator on a plane wave against exp(-i w t)"),
    preset!("kg-equivalence", "field/wave-function maps on a random band-limited field"),
    preset!("kg-energy", "Klein-Gordon energy against the wave-function norm over 1000 steps"),
    preset!("nonrel-limit", "reduced phase residual for c in 5, 10, 20, 40"),
    preset!("constraint-harmonic", "p_t + H along an RK4 oscillator trajectory"),
    preset!("constraint-relativistic", "p_t + H and the mass shell for a relativistic oscillator"),
    preset!("gauge-invariance", "q(t) rebuilt from tau^3 and exp(tau) - 1 parametrizations"),
    preset!("uncertainty", "Robertson product of a spreading Gaussian and random packets"),
    preset!("split-step", "Strang splitting error ratios in a harmonic trap"),
];

pub fn find(name: &str) -> Result<&'static Preset, HarnessError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| HarnessError::UnknownPreset(name.to_string()))
}

impl Preset {
    pub fn config(&self) -> Result<ExperimentConfig, HarnessError> {
        ExperimentConfig::from_toml(self.toml)
    }
}
