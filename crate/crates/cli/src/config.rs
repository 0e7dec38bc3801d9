//! Scenario configuration: a single versioned JSON document.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use revival_core::commensurability::{DEFAULT_MAX_DEN, DEFAULT_QMAX, DEFAULT_TOL};
use revival_core::packet::{EvolutionRegistry, PacketSpec, DEFAULT_SIGMA};
use revival_core::revival::tune::{FamilyRegistry, ParameterFamily, TuneTarget};
use revival_core::{Lattice, ModelRegistry, ReducedFraction, ScaleKind};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PEAK_THRESHOLD: f64 = 0.1;
pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub model: ModelSpec,
    pub lattice: Lattice,
    #[serde(default)]
    pub packet: PacketConfig,
    #[serde(default = "default_mode")]
    pub mode: String,
    pub time_grid: TimeGrid,
    #[serde(default)]
    pub analysis: Analysis,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tune: Option<TuneConfig>,
}

fn default_mode() -> String {
    "exact".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub kind: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    #[serde(default = "default_sigma")]
    pub sigma1: f64,
    #[serde(default = "default_sigma")]
    pub sigma2: f64,
}

fn default_sigma() -> f64 {
    DEFAULT_SIGMA
}

impl Default for PacketConfig {
    fn default() -> Self {
        Self {
            sigma1: DEFAULT_SIGMA,
            sigma2: DEFAULT_SIGMA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    #[serde(default)]
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
}

/// A time at which `|A|²` is read off the series: a plain number, an
/// explicit `{t, label}` or a rational multiple of a time scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Probe {
    At(f64),
    Time {
        t: f64,
        #[serde(default)]
        label: Option<String>,
    },
    Scaled {
        fraction: ReducedFraction,
        of: ScaleKind,
        #[serde(default)]
        label: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Analysis {
    #[serde(default = "default_qmax")]
    pub qmax: i64,
    #[serde(default = "default_max_den")]
    pub max_den: i64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Enumeration horizon; defaults to the end of the time grid.
    #[serde(default)]
    pub tmax: Option<f64>,
    #[serde(default = "default_threshold")]
    pub peak_threshold: f64,
    #[serde(default)]
    pub probes: Vec<Probe>,
    /// Add probe and revival times to the sampled grid.
    #[serde(default = "yes")]
    pub include_feature_times: bool,
}

fn default_qmax() -> i64 {
    DEFAULT_QMAX
}
fn default_max_den() -> i64 {
    DEFAULT_MAX_DEN
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_threshold() -> f64 {
    DEFAULT_PEAK_THRESHOLD
}
fn yes() -> bool {
    true
}

impl Default for Analysis {
    fn default() -> Self {
        Self {
            qmax: DEFAULT_QMAX,
            max_den: DEFAULT_MAX_DEN,
            tol: DEFAULT_TOL,
            tmax: None,
            peak_threshold: DEFAULT_PEAK_THRESHOLD,
            probes: Vec::new(),
            include_feature_times: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuneConfig {
    pub family: String,
    #[serde(default = "empty_object")]
    pub params: Value,
    pub range: [f64; 2],
    pub target: String,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_grid() -> usize {
    200
}

/// Command-line overrides applied before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<String>,
    pub qmax: Option<i64>,
    pub samples: Option<usize>,
}

/// A parsed configuration together with its source text, kept for
/// locating validation errors.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ScenarioConfig,
    pub origin: String,
    source: String,
}

impl LoadedConfig {
    /// Parses and validates `source`; `origin` names it in messages.
    pub fn parse(source: &str, origin: &str, overrides: &Overrides) -> Result<Self> {
        let mut config: ScenarioConfig = serde_json::from_str(source).map_err(|e| {
            CliError::Config(format!(
                "{origin}:{}:{}: {}",
                e.line(),
                e.column(),
                strip_position(&e)
            ))
        })?;
        if let Some(mode) = &overrides.mode {
            config.mode = mode.clone();
        }
        if let Some(q) = overrides.qmax {
            config.analysis.qmax = q;
        }
        if let Some(n) = overrides.samples {
            config.time_grid.samples = n;
        }
        let loaded = Self {
            config,
            origin: origin.to_string(),
            source: source.to_string(),
        };
        loaded.validate()?;
        Ok(loaded)
    }

    pub fn from_path(path: &str, overrides: &Overrides) -> Result<Self> {
        let source = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{path}: cannot read config: {e}")))?;
        Self::parse(&source, path, overrides)
    }

    pub fn from_preset(name: &str, overrides: &Overrides) -> Result<Self> {
        let source = crate::presets::source(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset `{name}` (known: {})",
                crate::presets::NAMES.join(", ")
            ))
        })?;
        Self::parse(source, &format!("preset:{name}"), overrides)
    }

    fn err(&self, path: &[&str], msg: impl std::fmt::Display) -> CliError {
        self.err_at(&[path], msg)
    }

    /// Error located at the first of `paths` present in the source.
    fn err_at(&self, paths: &[&[&str]], msg: impl std::fmt::Display) -> CliError {
        match paths.iter().find_map(|p| locate(&self.source, p)) {
            Some(line) => CliError::Config(format!("{}:{line}: {msg}", self.origin)),
            None => CliError::Config(format!("{}: {msg}", self.origin)),
        }
    }

    fn validate(&self) -> Result<()> {
        let c = &self.config;
        if c.schema != SCHEMA_VERSION {
            return Err(self.err(
                &["schema"],
                format!(
                    "unsupported schema {} (expected {SCHEMA_VERSION})",
                    c.schema
                ),
            ));
        }

        ModelRegistry::with_builtins()
            .build(&c.model.kind, &c.model.params)
            .map_err(|e| self.err(&["model"], e))?;
        c.lattice
            .validate()
            .map_err(|e| self.err(&["lattice"], e))?;
        PacketSpec::new(c.lattice, c.packet.sigma1, c.packet.sigma2)
            .map_err(|e| self.err_at(&[&["packet"], &["lattice"]], e))?;

        let modes = EvolutionRegistry::with_builtins();
        let key = c.mode.replace('_', "-");
        if !modes.names().any(|n| n == key) {
            let known: Vec<_> = modes.names().collect();
            return Err(self.err(
                &["mode"],
                format!("unknown mode `{}` (known: {})", c.mode, known.join(", ")),
            ));
        }

        let g = &c.time_grid;
        if g.samples < 2 {
            return Err(self.err(
                &["time_grid", "samples"],
                format!("time_grid.samples must be >= 2, got {}", g.samples),
            ));
        }
        if !(g.t_start.is_finite() && g.t_end.is_finite() && g.t_end > g.t_start) {
            return Err(self.err(
                &["time_grid", "t_end"],
                format!(
                    "time_grid needs t_end > t_start, got [{}, {}]",
                    g.t_start, g.t_end
                ),
            ));
        }

        let a = &c.analysis;
        if a.qmax < 1 {
            return Err(self.err(
                &["analysis", "qmax"],
                format!("qmax must be >= 1, got {}", a.qmax),
            ));
        }
        if a.max_den < 1 {
            return Err(self.err(
                &["analysis", "max_den"],
                format!("max_den must be >= 1, got {}", a.max_den),
            ));
        }
        if !(a.tol > 0.0 && a.tol.is_finite()) {
            return Err(self.err(
                &["analysis", "tol"],
                format!("tol must be positive, got {}", a.tol),
            ));
        }
        if let Some(tmax) = a.tmax {
            if !(tmax > 0.0 && tmax.is_finite()) {
                return Err(self.err(
                    &["analysis", "tmax"],
                    format!("tmax must be positive, got {tmax}"),
                ));
            }
        }
        if !(a.peak_threshold >= 0.0 && a.peak_threshold.is_finite()) {
            return Err(self.err(
                &["analysis", "peak_threshold"],
                format!("peak_threshold must be >= 0, got {}", a.peak_threshold),
            ));
        }
        for p in &a.probes {
            let t = match p {
                Probe::At(t) | Probe::Time { t, .. } => *t,
                Probe::Scaled { .. } => continue,
            };
            if !t.is_finite() {
                return Err(self.err(
                    &["analysis", "probes"],
                    format!("probe time {t} is not finite"),
                ));
            }
        }

        if let Some(t) = &c.tune {
            t.resolve().map_err(|e| match e {
                CliError::Config(m) => self.err(&["tune"], m),
                other => other,
            })?;
        }
        Ok(())
    }
}

/// Tuning family, parameter range and target.
pub type ResolvedTune = (Arc<dyn ParameterFamily>, (f64, f64), TuneTarget);

impl TuneConfig {
    /// Family, range and target, checked.
    pub fn resolve(&self) -> Result<ResolvedTune> {
        let family = FamilyRegistry::with_builtins().build(&self.family, &self.params)?;
        let [lo, hi] = self.range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Config(format!(
                "tune range needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if self.grid < 2 {
            return Err(CliError::Config(format!(
                "tune grid must be >= 2, got {}",
                self.grid
            )));
        }
        let target: TuneTarget = self.target.parse()?;
        Ok((family, (lo, hi), target))
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    }
}

/// 1-based line of the last key in `path`, found by searching for each
/// quoted key after the previous one.
fn locate(source: &str, path: &[&str]) -> Option<usize> {
    let mut from = 0;
    for key in path {
        let needle = format!("\"{key}\"");
        from += source[from..].find(&needle)?;
    }
    Some(source[..from].matches('\n').count() + 1)
}
