use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use reparam_harness::{presets, run, ExperimentConfig, HarnessError, RunManifest};

#[derive(Parser)]
#[command(name = "reparam-qm", version, about = "Run spectral propagator and parametric mechanics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override `output.directory`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override `seed`.
        #[arg(long, value_parser = clap::value_parser!(u64).range(..=reparam_harness::config::MAX_SEED))]
        seed: Option<u64>,
    },
    /// Built-in experiments.
    Presets {
        #[command(subcommand)]
        command: PresetCommand,
    },
}

#[derive(Subcommand)]
enum PresetCommand {
    List,
    Run {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn execute(mut config: ExperimentConfig, out: Option<PathBuf>, seed: Option<u64>) -> Result<RunManifest, HarnessError> {
    if let Some(dir) = out {
        config.output.directory = dir;
    }
    if let Some(seed) = seed {
        config.seed = seed;
    }
    run(&config)
}

fn report(manifest: &RunManifest) -> ExitCode {
    for (name, value) in &manifest.metrics {
        println!("{name} = {value:e}");
    }
    println!("output: {}", manifest.config.output.directory.display());
    match &manifest.error {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: scenario {} failed: {e}", manifest.scenario);
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, seed } => ExperimentConfig::load(&config).and_then(|c| execute(c, out, seed)),
        Command::Presets { command: PresetCommand::List } => {
            for p in presets::PRESETS {
                println!("{:<24} {}", p.name, p.summary);
            }
            return ExitCode::SUCCESS;
        }
        Command::Presets { command: PresetCommand::Run { name, out } } => {
            presets::find(&name).and_then(|p| p.config()).and_then(|c| execute(c, out, None))
        }
    };
    match result {
        Ok(manifest) => report(&manifest),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
