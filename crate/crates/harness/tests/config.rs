use proptest::prelude::*;
use reparam_harness::config::*;
use reparam_harness::{ExperimentConfig, HarnessError};

const MINIMAL: &str = r#"
scenario = "evolve-sqrt"

[grid]
n = 256
length = 6.283185307179586

[constants]
hbar = 1.0
c = 1.0
mass = 1.0

[initial]
kind = "plane-wave"
mode = 1

[time]
dt = 0.1
steps = 10
snapshot_stride = 5

[output]
directory = "out"
"#;

fn message(text: &str) -> String {
    ExperimentConfig::from_toml(text).unwrap_err().to_string()
}

#[test]
fn minimal_config_parses() {
    let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
    assert_eq!(c.scenario, Scenario::EvolveSqrt);
    assert_eq!(c.grid.n, 256);
    assert_eq!(c.initial, Some(InitialCondition::PlaneWave { mode: 1 }));
    assert_eq!(c.output.formats, vec![Format::Csv, Format::Json]);
    assert_eq!(c.seed, 0);
}

#[test]
fn stride_must_divide_steps() {
    let m = message(&MINIMAL.replace("snapshot_stride = 5", "snapshot_stride = 3"));
    assert!(m.contains("time.snapshot_stride") && m.contains("divide"), "{m}");
}

#[test]
fn negative_mass_names_positivity() {
    let m = message(&MINIMAL.replace("mass = 1.0", "mass = -1.0"));
    assert!(m.contains("constants.mass") && m.contains("> 0"), "{m}");
}

#[test]
fn unknown_keys_are_named() {
    let m = message(&MINIMAL.replace("n = 256", "n = 256\ncells = 3"));
    assert!(m.contains("cells"), "{m}");
    let m = message(&MINIMAL.replace("mode = 1", "mode = 1\nphase = 0.5"));
    assert!(m.contains("phase"), "{m}");
    let m = message(&format!("{MINIMAL}\nextra = 1\n"));
    assert!(m.contains("extra"), "{m}");
}

#[test]
fn missing_fields_are_named() {
    let m = message(&MINIMAL.replace("length = 6.283185307179586\n", ""));
    assert!(m.contains("length"), "{m}");
    let m = message(&MINIMAL.replace("[initial]\nkind = \"plane-wave\"\nmode = 1\n", ""));
    assert!(m.contains("initial") && m.contains("required"), "{m}");
}

#[test]
fn range_checks() {
    for (from, to, field) in [
        ("n = 256", "n = 100", "grid.n"),
        ("dt = 0.1", "dt = 0.0", "time.dt"),
        ("mode = 1", "mode = 200", "initial.mode"),
        ("c = 1.0", "c = -2.0", "constants.c"),
        ("hbar = 1.0", "hbar = 0.0", "constants.hbar"),
        ("steps = 10", "steps = 0", "time.steps"),
    ] {
        let m = message(&MINIMAL.replace(from, to));
        assert!(m.contains(field), "{to}: {m}");
    }
}

#[test]
fn scenario_sections_are_required() {
    let scan = MINIMAL.replace("evolve-sqrt", "nonrel-limit-scan");
    assert!(message(&scan).contains("scan"));
    let model = MINIMAL.replace("evolve-sqrt", "ri-constraint");
    assert!(message(&model).contains("model"));
    let pot = format!("{MINIMAL}\n[potential]\nkind = \"harmonic\"\nomega = 1.0\n");
    assert!(message(&pot).contains("potential"));
    let superluminal = format!(
        "{}\n[model]\nkind = \"relativistic\"\nq0 = 0.0\nv0 = 1.0\n",
        MINIMAL.replace("evolve-sqrt", "ri-constraint")
    );
    assert!(message(&superluminal).contains("model.v0"));
}

#[test]
fn presets_are_valid_and_round_trip() {
    for p in reparam_harness::presets::PRESETS {
        let c = p.config().unwrap();
        let again = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(c, again, "{}", p.name);
    }
    assert!(matches!(
        reparam_harness::presets::find("nope"),
        Err(HarnessError::UnknownPreset(_))
    ));
}

fn scenario() -> impl Strategy<Value = Scenario> {
    proptest::sample::select(Scenario::ALL.to_vec())
}

fn initial() -> impl Strategy<Value = Option<InitialCondition>> {
    prop_oneof![
        Just(None),
        (-10.0f64..10.0, 0.1f64..3.0, -5.0f64..5.0)
            .prop_map(|(center, width, momentum)| Some(InitialCondition::Gaussian { center, width, momentum })),
        (-4i64..4).prop_map(|mode| Some(InitialCondition::PlaneWave { mode })),
        (0usize..3).prop_map(|max_mode| Some(InitialCondition::RandomBandLimited { max_mode })),
    ]
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(
        scenario in scenario(),
        seed in 0..=MAX_SEED,
        log_n in 3u32..10,
        length in 0.5f64..100.0,
        hbar in 0.1f64..10.0,
        c in 0.1f64..100.0,
        mass in 0.1f64..10.0,
        initial in initial(),
        dt in 1e-4f64..1.0,
        stride in 1usize..5,
        blocks in 1usize..5,
        json_only in any::<bool>(),
    ) {
        let config = ExperimentConfig {
            scenario,
            seed,
            grid: GridConfig { n: 1 << log_n, length },
            constants: ConstantsConfig { hbar, c, mass },
            initial,
            time: TimeConfig { dt, steps: stride * blocks, snapshot_stride: stride },
            output: OutputConfig {
                directory: "some/dir".into(),
                formats: if json_only { vec![Format::Json] } else { vec![Format::Csv, Format::Json] },
            },
            potential: None,
            scan: Some(ScanConfig { c_values: vec![c, 2.0 * c], mode: 1, elapsed: 0.5 }),
            model: Some(ModelConfig { kind: ModelKind::Harmonic, q0: 0.5, v0: -0.25, omega: 2.0, samples: 10 }),
            convergence: None,
        };
        let text = config.to_toml().unwrap();
        let parsed: ExperimentConfig = toml::from_str(&text).unwrap();
        prop_assert_eq!(parsed, config);
    }
}

#[test]
fn oversized_seed_rejected() {
    let mut c = ExperimentConfig::from_toml(MINIMAL).unwrap();
    c.seed = MAX_SEED + 1;
    assert!(c.validate().unwrap_err().to_string().contains("seed"));
}
