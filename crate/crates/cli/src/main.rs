use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slitwave_cli::{parse_config, run_oracles, run_scenario, CliError, Output, ScenarioConfig};

/// Atom diffraction through one and two slits.
#[derive(Parser)]
#[command(name = "slitwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its outputs and manifest.
    Run {
        config: PathBuf,
        /// Output directory, overriding `output.dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit only these outputs (comma-separated).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        /// Accepted for scripts; runs never use randomness.
        #[arg(long)]
        seedless_deterministic: bool,
    },
    /// Compare computed spectra and a Gaussian Wigner map with closed forms.
    Oracle { config: PathBuf },
    /// Parse and validate a scenario, then exit.
    Validate { config: PathBuf },
}

fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { context: format!("cannot read {}", path.display()), source: e })?;
    parse_config(&text).map_err(|source| CliError::Config { path: path.to_path_buf(), source })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SLITWAVE_THREADS") else {
        return Ok(());
    };
    let threads: usize =
        value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Validation(format!("SLITWAVE_THREADS must be a positive integer, got `{value}`"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(format!("cannot configure {threads} threads: {e}")))
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!(
                "{}: ok ({} slit kinds, {} snapshots, outputs: {})",
                config.display(),
                cfg.kinds.len(),
                cfg.snapshots.len(),
                cfg.outputs.iter().map(|o| o.name()).collect::<Vec<_>>().join(",")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { config } => {
            let cfg = load(&config)?;
            let results = run_oracles(&cfg)?;
            for r in &results {
                println!(
                    "{} = {:.3e} (tolerance {:.0e}) {}",
                    r.name,
                    r.deviation,
                    r.tolerance,
                    if r.passed() { "pass" } else { "FAIL" }
                );
            }
            Ok(if results.iter().all(|r| r.passed()) { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Run { config, out, only, seedless_deterministic: _ } => {
            let mut cfg = load(&config)?;
            if let Some(dir) = out {
                cfg = cfg.with_output_dir(dir);
            }
            if let Some(words) = only {
                let outputs = words
                    .iter()
                    .map(|w| {
                        Output::parse(w.trim()).ok_or_else(|| CliError::Validation(format!("unknown output `{w}`")))
                    })
                    .collect::<Result<_, _>>()?;
                cfg = cfg.with_outputs(outputs).map_err(|source| CliError::Config { path: config.clone(), source })?;
            }
            let manifest = run_scenario(&cfg)?;
            println!("{} data files written to {}", manifest.files.len(), cfg.output_dir.display());
            if manifest.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                for f in &manifest.failed {
                    eprintln!("failed check: {f}");
                }
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
