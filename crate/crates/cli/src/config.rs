//! Flat `key=value` run configuration.
//!
//! Sources are layered: preset defaults, then the config document, then
//! command-line flags and overrides. Every key is validated; unknown keys are
//! errors.

use std::collections::BTreeMap;
use std::fmt;

use cavity_eit::{
    effective_from_microscopic, preset, GridSpec, MicroscopicParams, PresetKind, SimulationConfig,
    SystemParams, Taper, DEFAULT_PROMINENCE,
};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Steady,
    Response,
    Flucspec,
    Stochastic,
    Detect,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Steady,
        Command::Response,
        Command::Flucspec,
        Command::Stochastic,
        Command::Detect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Steady => "steady",
            Command::Response => "response",
            Command::Flucspec => "flucspec",
            Command::Stochastic => "stochastic",
            Command::Detect => "detect",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    fn uses_grid(self) -> bool {
        self != Command::Steady
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Which curve family `detect` classifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectSource {
    Response,
    Spectrum,
}

impl DetectSource {
    pub fn name(self) -> &'static str {
        match self {
            DetectSource::Response => "response",
            DetectSource::Spectrum => "spectrum",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub preset: Option<String>,
    pub params: SystemParams<f64>,
    /// Set when couplings were derived from atom-level parameters.
    pub microscopic: Option<MicroscopicParams<f64>>,
    pub grid: GridSpec,
    pub degenerate: bool,
    pub simulation: Option<SimulationConfig<f64>>,
    pub detect_source: DetectSource,
    pub prominence: f64,
    pub low_excitation_fraction: f64,
    pub output_path: String,
    pub output_format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("missing required keys: {}", .0.join(", "))]
    MissingKeys(Vec<String>),

    #[error("{origin}: `{key}`: {message}")]
    InvalidValue {
        key: String,
        origin: Origin,
        message: String,
    },

    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { key: String, origin: Origin },

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("{0}")]
    Invalid(String),
}

/// Where a value came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    CommandLine,
    Preset(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::CommandLine => f.write_str("command line"),
            Origin::Preset(name) => write!(f, "preset {name}"),
        }
    }
}

const PARAM_KEYS: [&str; 12] = [
    "delta_c", "delta_a", "delta_b", "G_A", "G_B", "chi", "kappa", "gamma_A", "gamma_B", "N_c", "N_a", "N_b",
];
const MICRO_KEYS: [&str; 5] = ["atoms_a", "atoms_b", "g_a", "g_b", "omega_drive"];
const GRID_KEYS: [&str; 3] = ["grid_start", "grid_stop", "grid_count"];
const SIM_KEYS: [&str; 8] = [
    "time_step",
    "duration",
    "burn_in",
    "trajectories",
    "seed",
    "record_stride",
    "smoothing_bandwidth",
    "taper",
];
const OTHER_KEYS: [&str; 8] = [
    "command",
    "preset",
    "microscopic",
    "degenerate",
    "detect_source",
    "prominence",
    "low_excitation_fraction",
    "output",
];
const FORMAT_KEY: &str = "format";

fn is_known(key: &str) -> bool {
    PARAM_KEYS
        .iter()
        .chain(MICRO_KEYS.iter())
        .chain(GRID_KEYS.iter())
        .chain(SIM_KEYS.iter())
        .chain(OTHER_KEYS.iter())
        .any(|k| *k == key)
        || key == FORMAT_KEY
}

/// Unresolved key/value pairs with their origins; later inserts win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Origin)>,
}

impl RawConfig {
    pub fn set(&mut self, key: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        if !is_known(key) {
            return Err(ConfigError::UnknownKey {
                key: key.to_string(),
                origin,
            });
        }
        self.entries.insert(key.to_string(), (value.trim().to_string(), origin));
        Ok(())
    }

    /// Applies `other` on top of `self`.
    pub fn merge(&mut self, other: RawConfig) {
        self.entries.extend(other.entries);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn origin(&self, key: &str) -> Origin {
        self.entries
            .get(key)
            .map(|(_, o)| o.clone())
            .unwrap_or(Origin::CommandLine)
    }

    fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Parses one `key=value` override as given on the command line.
    pub fn set_assignment(&mut self, assignment: &str, origin: Origin) -> Result<(), ConfigError> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| ConfigError::InvalidValue {
            key: assignment.to_string(),
            origin: origin.clone(),
            message: "expected key=value".into(),
        })?;
        self.set(key.trim(), value, origin)
    }
}

/// Reads a flat `key=value` document (`#` starts a comment), or a JSON
/// parameter sidecar written by a previous run.
pub fn parse_document(source: &str) -> Result<RawConfig, ConfigError> {
    if source.trim_start().starts_with('{') {
        return parse_sidecar(source);
    }
    let mut raw = RawConfig::default();
    for (i, line) in source.lines().enumerate() {
        let number = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: number,
            message: format!("expected key=value, got `{content}`"),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line: number,
                message: "empty key".into(),
            });
        }
        raw.set(key, value, Origin::Line(number))?;
    }
    Ok(raw)
}

fn parse_sidecar(source: &str) -> Result<RawConfig, ConfigError> {
    let doc: serde_json::Value =
        serde_json::from_str(source).map_err(|e| ConfigError::Syntax {
            line: e.line(),
            message: format!("invalid JSON: {e}"),
        })?;
    let config = doc
        .get("config")
        .and_then(|c| c.as_object())
        .ok_or_else(|| ConfigError::Invalid("JSON document has no `config` object".into()))?;
    let mut raw = RawConfig::default();
    for (key, value) in config {
        let text = match value {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        raw.set(key, &text, Origin::Line(0))?;
    }
    Ok(raw)
}

/// `parse_document` followed by `resolve`.
pub fn parse_config(source: &str) -> Result<RunConfig, ConfigError> {
    resolve(&parse_document(source)?)
}

fn preset_defaults(name: &str, origin: Origin) -> Result<RawConfig, ConfigError> {
    let p = preset(name).ok_or_else(|| ConfigError::InvalidValue {
        key: "preset".into(),
        origin,
        message: format!(
            "unknown preset `{name}` (known: {})",
            cavity_eit::PRESETS.iter().map(|p| p.name).collect::<Vec<_>>().join(", ")
        ),
    })?;
    let params: SystemParams<f64> = p.params();
    let origin = Origin::Preset(name.to_string());
    let mut raw = RawConfig::default();
    for (key, value) in params_entries(&params) {
        raw.set(key, &value, origin.clone())?;
    }
    raw.set("grid_start", &fmt_f64(p.grid.start), origin.clone())?;
    raw.set("grid_stop", &fmt_f64(p.grid.stop), origin.clone())?;
    raw.set("grid_count", &p.grid.count.to_string(), origin.clone())?;
    let source = match p.kind {
        PresetKind::Response => "response",
        PresetKind::Spectrum => "spectrum",
    };
    raw.set("detect_source", source, origin)?;
    Ok(raw)
}

fn params_entries(p: &SystemParams<f64>) -> Vec<(&'static str, String)> {
    vec![
        ("delta_c", fmt_f64(p.detuning_cavity)),
        ("delta_a", fmt_f64(p.detuning_a)),
        ("delta_b", fmt_f64(p.detuning_b)),
        ("G_A", fmt_f64(p.coupling_a)),
        ("G_B", fmt_f64(p.coupling_b)),
        ("chi", fmt_f64(p.drive)),
        ("kappa", fmt_f64(p.cavity_decay)),
        ("gamma_A", fmt_f64(p.decay_a)),
        ("gamma_B", fmt_f64(p.decay_b)),
        ("N_c", fmt_f64(p.thermal_c)),
        ("N_a", fmt_f64(p.thermal_a)),
        ("N_b", fmt_f64(p.thermal_b)),
    ]
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn invalid(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::InvalidValue {
            key: key.to_string(),
            origin: self.raw.origin(key),
            message: message.into(),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        let Some(text) = self.raw.get(key) else { return Ok(None) };
        let v: f64 = text
            .parse()
            .map_err(|_| self.invalid(key, format!("not a number: `{text}`")))?;
        if !v.is_finite() {
            return Err(self.invalid(key, "must be finite"));
        }
        Ok(Some(v))
    }

    fn non_negative(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.f64(key)? {
            Some(v) if v < 0.0 => Err(self.invalid(key, format!("must be non-negative, got {v}"))),
            other => Ok(other),
        }
    }

    fn positive(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.f64(key)? {
            Some(v) if v <= 0.0 => Err(self.invalid(key, format!("must be positive, got {v}"))),
            other => Ok(other),
        }
    }

    fn u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        let Some(text) = self.raw.get(key) else { return Ok(None) };
        text.parse()
            .map(Some)
            .map_err(|_| self.invalid(key, format!("not a non-negative integer: `{text}`")))
    }

    fn bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        let Some(text) = self.raw.get(key) else { return Ok(None) };
        match text {
            "true" | "1" | "yes" => Ok(Some(true)),
            "false" | "0" | "no" => Ok(Some(false)),
            _ => Err(self.invalid(key, format!("not a boolean: `{text}`"))),
        }
    }
}

/// Validates a layered raw configuration into a [`RunConfig`].
pub fn resolve(raw: &RawConfig) -> Result<RunConfig, ConfigError> {
    // Preset values sit underneath everything else.
    let layered;
    let raw = match raw.get("preset") {
        Some(name) => {
            let mut base = preset_defaults(name, raw.origin("preset"))?;
            base.merge(raw.clone());
            layered = base;
            &layered
        }
        None => raw,
    };
    let r = Reader { raw };

    let microscopic = r.bool("microscopic")?.unwrap_or(false);
    let command_text = raw.get("command");

    let mut required: Vec<&str> = vec!["command", "output"];
    let param_keys: Vec<&str> = if microscopic {
        PARAM_KEYS
            .iter()
            .copied()
            .filter(|k| !matches!(*k, "G_A" | "G_B" | "chi"))
            .chain(MICRO_KEYS)
            .collect()
    } else {
        PARAM_KEYS.to_vec()
    };
    required.extend(param_keys.iter().copied());
    let command = command_text.and_then(Command::parse);
    if command.is_none_or(|c| c.uses_grid()) {
        required.extend(GRID_KEYS);
    }
    let missing: Vec<String> = required
        .iter()
        .filter(|k| !raw.contains(k))
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::MissingKeys(missing));
    }
    let command = command.ok_or_else(|| {
        r.invalid(
            "command",
            format!(
                "unknown command `{}` (expected one of steady, response, flucspec, stochastic, detect)",
                command_text.unwrap_or_default()
            ),
        )
    })?;

    let mut params = SystemParams::<f64> {
        detuning_cavity: r.f64("delta_c")?.unwrap_or_default(),
        detuning_a: r.f64("delta_a")?.unwrap_or_default(),
        detuning_b: r.f64("delta_b")?.unwrap_or_default(),
        coupling_a: 0.0,
        coupling_b: 0.0,
        drive: 0.0,
        cavity_decay: r.positive("kappa")?.unwrap_or(1.0),
        decay_a: r.non_negative("gamma_A")?.unwrap_or_default(),
        decay_b: r.non_negative("gamma_B")?.unwrap_or_default(),
        thermal_c: r.non_negative("N_c")?.unwrap_or_default(),
        thermal_a: r.non_negative("N_a")?.unwrap_or_default(),
        thermal_b: r.non_negative("N_b")?.unwrap_or_default(),
    };

    let micro = if microscopic {
        for key in ["G_A", "G_B", "chi"] {
            if raw.contains(key) && !matches!(raw.origin(key), Origin::Preset(_)) {
                return Err(r.invalid(key, "cannot be combined with microscopic=true"));
            }
        }
        let atoms = |key: &str| -> Result<u64, ConfigError> {
            match r.u64(key)? {
                Some(0) => Err(r.invalid(key, "must be at least 1")),
                Some(n) => Ok(n),
                None => unreachable!("required key checked above"),
            }
        };
        let micro = MicroscopicParams {
            atom_count_a: atoms("atoms_a")?,
            atom_count_b: atoms("atoms_b")?,
            single_atom_coupling_a: r.non_negative("g_a")?.unwrap_or_default(),
            single_atom_coupling_b: r.non_negative("g_b")?.unwrap_or_default(),
            drive_per_atom: r.non_negative("omega_drive")?.unwrap_or_default(),
        };
        let eff = effective_from_microscopic(&micro).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        params = params.with_couplings(eff);
        Some(micro)
    } else {
        params.coupling_a = r.non_negative("G_A")?.unwrap_or_default();
        params.coupling_b = r.non_negative("G_B")?.unwrap_or_default();
        params.drive = r.non_negative("chi")?.unwrap_or_default();
        None
    };
    params.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;

    let grid = if command.uses_grid() {
        let start = r.f64("grid_start")?.unwrap_or_default();
        let stop = r.f64("grid_stop")?.unwrap_or_default();
        let count = r.u64("grid_count")?.unwrap_or_default() as usize;
        if count < 2 {
            return Err(r.invalid("grid_count", format!("must be at least 2, got {count}")));
        }
        if !(start < stop) {
            return Err(r.invalid("grid_stop", format!("must exceed grid_start ({start} >= {stop})")));
        }
        GridSpec { start, stop, count }
    } else {
        GridSpec {
            start: r.f64("grid_start")?.unwrap_or(0.0),
            stop: r.f64("grid_stop")?.unwrap_or(0.0),
            count: r.u64("grid_count")?.unwrap_or(0) as usize,
        }
    };

    let simulation = if command == Command::Stochastic {
        Some(simulation_config(&r, &params)?)
    } else {
        None
    };

    let detect_source = match raw.get("detect_source").unwrap_or("response") {
        "response" => DetectSource::Response,
        "spectrum" => DetectSource::Spectrum,
        other => return Err(r.invalid("detect_source", format!("expected response or spectrum, got `{other}`"))),
    };

    let output_format = match raw.get(FORMAT_KEY) {
        None => match command {
            Command::Steady | Command::Detect => OutputFormat::Json,
            _ => OutputFormat::Csv,
        },
        Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => return Err(r.invalid(FORMAT_KEY, format!("expected csv or json, got `{other}`"))),
    };
    if output_format == OutputFormat::Csv && matches!(command, Command::Steady | Command::Detect) {
        return Err(r.invalid(FORMAT_KEY, format!("`{command}` writes JSON only")));
    }

    let output_path = raw.get("output").unwrap_or_default().to_string();
    if output_path.is_empty() {
        return Err(r.invalid("output", "must not be empty"));
    }

    Ok(RunConfig {
        command,
        preset: raw.get("preset").map(str::to_string),
        params,
        microscopic: micro,
        grid,
        degenerate: r.bool("degenerate")?.unwrap_or(true),
        simulation,
        detect_source,
        prominence: r.non_negative("prominence")?.unwrap_or(DEFAULT_PROMINENCE),
        low_excitation_fraction: r.positive("low_excitation_fraction")?.unwrap_or(0.1),
        output_path,
        output_format,
    })
}

fn simulation_config(r: &Reader<'_>, params: &SystemParams<f64>) -> Result<SimulationConfig<f64>, ConfigError> {
    let seed = r.u64("seed")?.unwrap_or(0);
    let trajectories = r.u64("trajectories")?.unwrap_or(200) as usize;
    if trajectories == 0 {
        return Err(r.invalid("trajectories", "must be at least 1"));
    }
    let mut sim = SimulationConfig::recommended(params, trajectories, seed)
        .map_err(|e| ConfigError::Invalid(format!("stochastic run needs a strictly stable generator: {e}")))?;
    if let Some(dt) = r.positive("time_step")? {
        sim.time_step = dt;
        if r.raw.get("record_stride").is_none() {
            sim.record_stride = ((0.01 / dt).round() as usize).max(1);
        }
    }
    if let Some(v) = r.positive("duration")? {
        sim.duration = v;
    }
    if let Some(v) = r.non_negative("burn_in")? {
        sim.burn_in = v;
    }
    if let Some(v) = r.u64("record_stride")? {
        if v == 0 {
            return Err(r.invalid("record_stride", "must be at least 1"));
        }
        sim.record_stride = v as usize;
    }
    if let Some(v) = r.non_negative("smoothing_bandwidth")? {
        sim.smoothing_bandwidth = v;
    }
    sim.taper = match r.raw.get("taper").unwrap_or("rectangular") {
        "rectangular" => Taper::Rectangular,
        "hann" => Taper::Hann,
        other => return Err(r.invalid("taper", format!("expected rectangular or hann, got `{other}`"))),
    };
    sim.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok(sim)
}

/// Flat `key → value` listing that `resolve` maps back to `config`.
pub fn to_entries(config: &RunConfig) -> Vec<(&'static str, String)> {
    let mut out: Vec<(&'static str, String)> = vec![("command", config.command.name().to_string())];
    if let Some(micro) = &config.microscopic {
        out.push(("microscopic", "true".into()));
        out.push(("atoms_a", micro.atom_count_a.to_string()));
        out.push(("atoms_b", micro.atom_count_b.to_string()));
        out.push(("g_a", fmt_f64(micro.single_atom_coupling_a)));
        out.push(("g_b", fmt_f64(micro.single_atom_coupling_b)));
        out.push(("omega_drive", fmt_f64(micro.drive_per_atom)));
        out.extend(
            params_entries(&config.params)
                .into_iter()
                .filter(|(k, _)| !matches!(*k, "G_A" | "G_B" | "chi")),
        );
    } else {
        out.extend(params_entries(&config.params));
    }
    out.push(("grid_start", fmt_f64(config.grid.start)));
    out.push(("grid_stop", fmt_f64(config.grid.stop)));
    out.push(("grid_count", config.grid.count.to_string()));
    out.push(("degenerate", config.degenerate.to_string()));
    if let Some(sim) = &config.simulation {
        out.push(("time_step", fmt_f64(sim.time_step)));
        out.push(("duration", fmt_f64(sim.duration)));
        out.push(("burn_in", fmt_f64(sim.burn_in)));
        out.push(("trajectories", sim.trajectory_count.to_string()));
        out.push(("seed", sim.seed.to_string()));
        out.push(("record_stride", sim.record_stride.to_string()));
        out.push(("smoothing_bandwidth", fmt_f64(sim.smoothing_bandwidth)));
        out.push((
            "taper",
            match sim.taper {
                Taper::Rectangular => "rectangular",
                Taper::Hann => "hann",
            }
            .into(),
        ));
    }
    out.push(("detect_source", config.detect_source.name().into()));
    out.push(("prominence", fmt_f64(config.prominence)));
    out.push(("low_excitation_fraction", fmt_f64(config.low_excitation_fraction)));
    out.push(("output", config.output_path.clone()));
    out.push((FORMAT_KEY, config.output_format.name().into()));
    out
}

/// Renders `config` as a flat `key=value` document.
pub fn to_document(config: &RunConfig) -> String {
    to_entries(config)
        .into_iter()
        .map(|(k, v)| format!("{k}={v}\n"))
        .collect()
}
