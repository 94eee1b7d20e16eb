use std::fs;
use std::path::Path;

use reparam_harness::config::InitialCondition;
use reparam_harness::{presets, run, ExperimentConfig, RunManifest};

fn preset_in(name: &str, dir: &Path) -> ExperimentConfig {
    let mut c = presets::find(name).unwrap().config().unwrap();
    c.output.directory = dir.join(name);
    c
}

fn read_manifest(dir: &Path) -> RunManifest {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn kg_equivalence_meets_tolerances() {
    let tmp = tempfile::tempdir().unwrap();
    let c = preset_in("kg-equivalence", tmp.path());
    let m = run(&c).unwrap();
    assert!(m.succeeded(), "{:?}", m.error);
    for key in ["schrodinger_residual", "kg_residual", "roundtrip_residual", "density_residual"] {
        assert!(m.metrics[key] < 1e-8, "{key} = {}", m.metrics[key]);
    }
    assert_eq!(read_manifest(&c.output.directory), m);
    for i in 0..=10 {
        let text = fs::read_to_string(c.output.directory.join(format!("snapshot_{i}.csv"))).unwrap();
        assert!(text.starts_with("x,re,im\n"));
        assert_eq!(text.lines().count(), 257);
    }
}

#[test]
fn nonrel_scan_decreases_as_inverse_square() {
    let tmp = tempfile::tempdir().unwrap();
    let m = run(&preset_in("nonrel-limit", tmp.path())).unwrap();
    let slope = m.metrics["log_log_slope"];
    assert!((slope + 2.0).abs() < 0.1, "{slope}");
    let r10 = m.metrics["residual_c10"];
    assert!((r10 / 1.25e-3 - 1.0).abs() < 0.05);
    let table = fs::read_to_string(tmp.path().join("nonrel-limit/metrics.csv")).unwrap();
    assert_eq!(table.lines().next(), Some("c,residual,leading_order"));
    assert_eq!(table.lines().count(), 5);
}

#[test]
fn every_preset_succeeds() {
    let tmp = tempfile::tempdir().unwrap();
    for p in presets::PRESETS {
        let m = run(&preset_in(p.name, tmp.path())).unwrap();
        assert!(m.succeeded(), "{}: {:?}", p.name, m.error);
        assert!(!m.metrics.is_empty());
        assert!(m.metrics.values().all(|v| v.is_finite()));
    }
}

#[test]
fn preset_metrics_reach_targets() {
    let tmp = tempfile::tempdir().unwrap();
    let get = |name: &str| run(&preset_in(name, tmp.path())).unwrap().metrics;
    assert!(get("dispersion")["plane_wave_error"] < 1e-12);
    let energy = get("kg-energy");
    assert!(energy["max_energy_drift"] < 1e-10);
    assert!(energy["max_energy_probability_mismatch"] < 1e-10);
    for name in ["constraint-harmonic", "constraint-relativistic"] {
        let m = get(name);
        assert!(m["max_constraint"] < 1e-8);
        assert!(m["max_factorization_residual"] < 1e-10);
        assert!(m["max_bracket_error"] < 1e-8);
    }
    assert!(get("constraint-relativistic")["max_mass_shell_residual"] < 1e-12);
    assert!(get("gauge-invariance")["max_gauge_disagreement"] < 1e-7);
    let u = get("uncertainty");
    assert!((u["initial_product_over_bound"] - 1.0).abs() < 1e-6);
    assert!(u["random_min_product_over_bound"] >= 1.0 - 1e-6);
    let s = get("split-step");
    for key in ["convergence_ratio_0", "convergence_ratio_1"] {
        assert!((s[key] - 4.0).abs() < 0.4, "{key} = {}", s[key]);
    }
}

#[test]
fn free_particle_gauge_reconstruction_is_linear() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = preset_in("gauge-invariance", tmp.path());
    let text = c.to_toml().unwrap().replace("kind = \"harmonic\"", "kind = \"free\"");
    c = ExperimentConfig::from_toml(&text).unwrap();
    let m = run(&c).unwrap();
    assert!(m.metrics["max_free_particle_deviation"] < 1e-9);
}

#[test]
fn runs_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let mut a = preset_in("kg-equivalence", tmp.path());
    a.seed = 99;
    let mut b = a.clone();
    b.output.directory = tmp.path().join("again");
    let (ma, mb) = (run(&a).unwrap(), run(&b).unwrap());
    assert_eq!(
        serde_json::to_string(&ma.metrics).unwrap(),
        serde_json::to_string(&mb.metrics).unwrap()
    );
    assert_eq!(ma.series, mb.series);
    let sa = fs::read_to_string(a.output.directory.join("snapshot_3.csv")).unwrap();
    let sb = fs::read_to_string(b.output.directory.join("snapshot_3.csv")).unwrap();
    assert_eq!(sa, sb);

    let mut c = a.clone();
    c.seed = 100;
    c.output.directory = tmp.path().join("other");
    assert_ne!(run(&c).unwrap().metrics, ma.metrics);
}

#[test]
fn failure_still_writes_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = preset_in("uncertainty", tmp.path());
    // a packet sitting on the box edge is not localized
    c.initial = Some(InitialCondition::Gaussian { center: 0.0, width: 0.625, momentum: 0.0 });
    let m = run(&c).unwrap();
    assert!(!m.succeeded());
    let on_disk = read_manifest(&c.output.directory);
    assert!(on_disk.error.unwrap().contains("localized"));
    assert!(!c.output.directory.join("snapshot_0.csv").exists());
}

#[test]
fn custom_file_initial_condition() {
    let tmp = tempfile::tempdir().unwrap();
    let base = presets::find("dispersion").unwrap().config().unwrap();
    let n = base.grid.n;
    let dx = base.grid.length / n as f64;
    let mut csv = String::from("x,re,im\n");
    for j in 0..n {
        let x = j as f64 * dx;
        csv.push_str(&format!("{:?},{:?},{:?}\n", x, (5.0 * x).cos(), (5.0 * x).sin()));
    }
    fs::write(tmp.path().join("wave.csv"), csv).unwrap();
    let text = base
        .to_toml()
        .unwrap()
        .replace("kind = \"plane-wave\"\nmode = 5", "kind = \"custom-file\"\npath = \"wave.csv\"")
        .replace("reparam-out/dispersion", &tmp.path().join("out").display().to_string());
    fs::write(tmp.path().join("run.toml"), text).unwrap();
    let c = ExperimentConfig::load(&tmp.path().join("run.toml")).unwrap();
    let m = run(&c).unwrap();
    assert!(m.succeeded(), "{:?}", m.error);
    let planar = run(&preset_in("dispersion", tmp.path())).unwrap();
    assert!((m.metrics["final_norm"] - planar.metrics["final_norm"]).abs() < 1e-12);
}

#[test]
fn csv_only_output_omits_series() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = preset_in("kg-energy", tmp.path());
    c.output.formats = vec![reparam_harness::config::Format::Csv];
    let m = run(&c).unwrap();
    assert!(m.series.is_empty());
    let table = fs::read_to_string(c.output.directory.join("metrics.csv")).unwrap();
    assert!(table.starts_with("time,"));
    assert_eq!(table.lines().count(), 12);
}
