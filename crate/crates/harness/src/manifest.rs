use std::collections::BTreeMap;
use std::fs;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format};
use crate::io::Table;
use crate::scenarios::{self, ScenarioOutput};
use crate::HarnessError;

/// Record of one run. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub version: String,
    pub seed: u64,
    pub wall_clock_seconds: f64,
    pub metrics: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<f64>>,
    pub error: Option<String>,
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn succeeded(&self) -> bool {
        self.error.is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

/// Runs the configured scenario and writes its outputs.
///
/// Returns `Err` only for problems found before the scenario starts (an
/// unwritable output directory, for instance). Scenario failures produce a
/// manifest with `error` set, which is also written to disk.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest, HarnessError> {
    config.validate()?;
    config.prepare_output()?;
    let dir = &config.output.directory;
    let start = Instant::now();
    let result = scenarios::execute(config);
    let wall_clock_seconds = start.elapsed().as_secs_f64();

    let (mut output, mut error) = match result {
        Ok(output) => (output, None),
        Err(e) => (ScenarioOutput::default(), Some(e.to_string())),
    };
    let bad: Vec<String> = output
        .metrics
        .iter()
        .filter(|(_, v)| !v.is_finite())
        .map(|(k, _)| k.clone())
        .collect();
    if !bad.is_empty() {
        output.metrics.retain(|_, v| v.is_finite());
        error.get_or_insert_with(|| format!("non-finite metrics: {}", bad.join(", ")));
    }
    for values in output.series.values_mut() {
        if values.iter().any(|v| !v.is_finite()) {
            error.get_or_insert_with(|| "non-finite value in metric series".to_string());
            values.retain(|v| v.is_finite());
        }
    }

    if config.output.formats.contains(&Format::Csv) && error.is_none() {
        for (i, snap) in output.snapshots.iter().enumerate() {
            snap.write(&dir.join(format!("snapshot_{i}.csv")))?;
        }
        if let Some(table) = &output.table {
            table.write(&dir.join("metrics.csv"))?;
        } else {
            series_table(&output.series).write(&dir.join("metrics.csv"))?;
        }
    }
    if !config.output.formats.contains(&Format::Json) {
        output.series.clear();
    }

    let manifest = RunManifest {
        scenario: config.scenario.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        wall_clock_seconds,
        metrics: output.metrics,
        series: output.series,
        error,
        config: config.clone(),
    };
    let path = dir.join("manifest.json");
    fs::write(&path, manifest.to_json() + "\n").map_err(|e| HarnessError::io(&path, e))?;
    Ok(manifest)
}

/// One row per series index, `time` first. Series of unequal length are
/// cut to the shortest.
fn series_table(series: &BTreeMap<String, Vec<f64>>) -> Table {
    let mut columns: Vec<(&str, &Vec<f64>)> = series.iter().map(|(k, v)| (k.as_str(), v)).collect();
    columns.sort_by_key(|(k, _)| *k != "time");
    let names: Vec<&str> = columns.iter().map(|(k, _)| *k).collect();
    let mut table = Table::new(&names);
    let rows = columns.iter().map(|(_, v)| v.len()).min().unwrap_or(0);
    for i in 0..rows {
        table.push(columns.iter().map(|(_, v)| v[i]).collect());
    }
    table
}
