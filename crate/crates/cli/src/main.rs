use std::path::PathBuf;
use std::process::ExitCode;

use cavity_eit_cli::{init_thread_pool, resolve, run, Origin, RawConfig, RunError};
use clap::Parser;

/// Steady state, response curves and fluctuation spectra of two atomic
/// ensembles coupled through one cavity mode.
#[derive(Debug, Parser)]
#[command(name = "cavity-eit", version)]
struct Cli {
    /// steady, response, flucspec, stochastic or detect
    command: String,
    /// Flat key=value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named parameter set (fig2a ... fig4b, calibration)
    #[arg(long)]
    preset: Option<String>,
    /// Output file; a `.meta.json` sidecar is written next to it
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Seed for stochastic runs
    #[arg(long)]
    seed: Option<u64>,
    /// key=value overrides applied last
    overrides: Vec<String>,
}

fn build(cli: &Cli) -> Result<cavity_eit_cli::RunConfig, RunError> {
    let mut raw = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
                path: path.clone(),
                source,
            })?;
            cavity_eit_cli::parse_document(&text)?
        }
        None => RawConfig::default(),
    };
    let mut flags = RawConfig::default();
    flags.set("command", &cli.command, Origin::CommandLine)?;
    if let Some(v) = &cli.preset {
        flags.set("preset", v, Origin::CommandLine)?;
    }
    if let Some(v) = &cli.out {
        flags.set("output", v, Origin::CommandLine)?;
    }
    if let Some(v) = &cli.format {
        flags.set("format", v, Origin::CommandLine)?;
    }
    if let Some(v) = cli.seed {
        flags.set("seed", &v.to_string(), Origin::CommandLine)?;
    }
    for o in &cli.overrides {
        flags.set_assignment(o, Origin::CommandLine)?;
    }
    raw.merge(flags);
    Ok(resolve(&raw)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_thread_pool()
        .map_err(RunError::from)
        .and_then(|()| build(&cli))
        .and_then(|cfg| run(&cfg));
    match result {
        Ok(summary) => {
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("cavity-eit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
