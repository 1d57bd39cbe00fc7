//! Command-line front end for the `cavity-eit` library.
//!
//! Each run reads a flat configuration, computes one artefact and writes it
//! to `output` together with a `<output>.meta.json` sidecar that records the
//! resolved parameters and the tool version.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use cavity_eit::{
    detect_windows, drift_matrix, estimate_spectrum, require_stable, response_sweep, spectrum_sweep,
    steady_state_analytic, Error as CoreError, LowExcitationCheck, WindowReport,
};
use thiserror::Error;

pub use config::{
    parse_config, parse_document, resolve, Command, ConfigError, DetectSource, Origin, OutputFormat, RawConfig,
    RunConfig,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable capping worker threads (`0` = one per core).
pub const THREADS_ENV: &str = "CAVITY_EIT_THREADS";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Compute(#[from] CoreError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Compute(e) => match e {
                CoreError::InvalidParameter { .. } | CoreError::InvalidGrid(_) => 2,
                CoreError::SingularParameters(_) | CoreError::EmptyCurve => 3,
                CoreError::IntegrationDiverged { .. } => 4,
            },
            RunError::Io { .. } => 5,
        }
    }
}

/// What a run produced, for callers that want more than the files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub output_path: PathBuf,
    pub sidecar_path: PathBuf,
    pub warnings: Vec<String>,
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Builds the global rayon pool from `CAVITY_EIT_THREADS`. Safe to call more
/// than once; only the first call has an effect.
pub fn init_thread_pool() -> Result<(), ConfigError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(text) => text.trim().parse::<usize>().map_err(|_| ConfigError::InvalidValue {
            key: THREADS_ENV.into(),
            origin: Origin::CommandLine,
            message: format!("not a non-negative integer: `{text}`"),
        })?,
        Err(_) => 0,
    };
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Executes `config`, writing the artefact and its sidecar.
pub fn run(config: &RunConfig) -> Result<RunSummary, RunError> {
    let (body, warnings) = render(config)?;
    let out = PathBuf::from(&config.output_path);
    write_file(&out, &body)?;
    let sidecar = sidecar_path(&out);
    write_file(&sidecar, &output::sidecar_json(config, VERSION, &warnings))?;
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(RunSummary {
        output_path: out,
        sidecar_path: sidecar,
        warnings,
    })
}

/// Computes the artefact for `config` and renders it, without touching disk.
pub fn render(config: &RunConfig) -> Result<(String, Vec<String>), RunError> {
    let params = &config.params;
    match config.command {
        Command::Steady => {
            let state = steady_state_analytic(params)?;
            let check = LowExcitationCheck {
                atom_count_a: config.microscopic.map(|m| m.atom_count_a),
                atom_count_b: config.microscopic.map(|m| m.atom_count_b),
                fraction: config.low_excitation_fraction,
            };
            let warnings = check.check(&state);
            Ok((output::steady_json(&state, &warnings), warnings))
        }
        Command::Response => {
            let grid = config.grid.points::<f64>()?;
            let curve = response_sweep(params, &grid, config.degenerate)?;
            let mut warnings = Vec::new();
            let flagged = curve.flagged_count();
            if flagged > 0 {
                warnings.push(format!("{flagged} grid points have no steady state (written as NaN)"));
            }
            let body = match config.output_format {
                OutputFormat::Csv => output::response_csv(&curve),
                OutputFormat::Json => output::response_json(&curve),
            };
            Ok((body, warnings))
        }
        Command::Flucspec | Command::Stochastic => {
            let grid = config.grid.points::<f64>()?;
            let curve = if config.command == Command::Flucspec {
                require_stable(&drift_matrix(params)?)?;
                spectrum_sweep(params, &grid)?
            } else {
                let sim = config.simulation.as_ref().expect("resolved stochastic config");
                estimate_spectrum(params, sim, &grid)?
            };
            let warnings = curve.warnings.clone();
            let body = match config.output_format {
                OutputFormat::Csv => output::spectrum_csv(&curve),
                OutputFormat::Json => output::spectrum_json(&curve),
            };
            Ok((body, warnings))
        }
        Command::Detect => {
            let grid = config.grid.points::<f64>()?;
            let channels: Vec<(&str, Vec<f64>)> = match config.detect_source {
                DetectSource::Response => {
                    let c = response_sweep(params, &grid, config.degenerate)?;
                    vec![
                        ("intensity_a", c.intensity_a),
                        ("intensity_b", c.intensity_b),
                        ("intensity_c", c.intensity_c),
                    ]
                }
                DetectSource::Spectrum => {
                    require_stable(&drift_matrix(params)?)?;
                    let c = spectrum_sweep(params, &grid)?;
                    vec![("s_c", c.s_c), ("s_a", c.s_a), ("s_b", c.s_b)]
                }
            };
            let reports = channels
                .into_iter()
                .map(|(name, values)| Ok((name, detect_windows(&grid, &values, config.prominence)?)))
                .collect::<Result<Vec<(&str, WindowReport<f64>)>, CoreError>>()?;
            Ok((output::detect_json(config, &reports), Vec::new()))
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}
