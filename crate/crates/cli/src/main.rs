//! Batch front end for the landau-wave solver.

mod config;
mod diagnostic;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{RawConfig, ScenarioConfig};
use diagnostic::Diagnostic;
use run::{Mode, RunContext, SnapshotGrid};

#[derive(Debug, Parser)]
#[command(
    name = "landau-wave",
    version,
    about = "Wave equation with a Landau Hamiltonian and time-dependent speed"
)]
struct Cli {
    #[arg(long, value_enum)]
    mode: Mode,

    /// Flat `key = value` scenario file.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, default_value = "out")]
    out_dir: PathBuf,

    /// Worker threads for the parallel maps (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    /// Field snapshots for `solve`: `nx,ny,extent`.
    #[arg(long, value_parser = SnapshotGrid::parse)]
    snapshot_grid: Option<SnapshotGrid>,

    /// Override a config key, e.g. `--set level_cap=8`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn execute(cli: &Cli) -> Result<(), Diagnostic> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Diagnostic::usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Diagnostic::usage(format!("cannot size thread pool: {e}")))?;
    }
    let mut raw = match &cli.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    raw.apply_overrides(&cli.overrides)?;
    let config = ScenarioConfig::resolve(&raw)?;

    let mut extra = vec![
        ("mode", cli.mode.name().to_string()),
        ("threads", cli.threads.map_or("auto".into(), |n| n.to_string())),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
    ];
    if cli.mode == Mode::EstimateStudy {
        extra.push(("study_angular_cap", "equal to each truncation level cap".to_string()));
    }
    if let Some(path) = &cli.config {
        extra.push(("config_file", path.display().to_string()));
    }
    let ctx = RunContext {
        config: &config,
        out_dir: &cli.out_dir,
        provenance: config.provenance(&extra),
        snapshot_grid: cli.snapshot_grid,
    };
    let report = run::run(cli.mode, &ctx)?;
    println!("{report}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("{}", Diagnostic::usage(first.to_string()));
            return ExitCode::from(2);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(d) => {
            eprintln!("{d}");
            ExitCode::from(d.exit_code())
        }
    }
}
