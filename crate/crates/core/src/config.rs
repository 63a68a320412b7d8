//! Run configuration.
//!
//! A config is a sectioned key-value file (TOML syntax):
//!
//! ```toml
//! [grid]
//! e_min_ev = 1.505
//! e_max_ev = 1.525
//! count = 10000
//!
//! [slab]
//! thickness_um = 25.0
//!
//! [medium]
//! kind = "lorentz"          # or kind = "table", path = "chi.csv"
//! resonance_ev = 1.515
//! linewidth_ev = 0.0002
//! # oscillator_strength_ev2 = 3.03e-4   default: peak χ″ = 1
//! # background = 0.0
//!
//! [emission]                # optional
//! temperature_k = 300.0     # default 300
//! chemical_potential_ev = 0 # default 0
//!
//! [squeeze]                 # optional
//! magnitude = 0.2           # default 0.2
//! phase_rad = 0.0           # default 0
//! carrier_ev = 1.515        # default: resonance (lorentz) or grid centre (table)
//!
//! [output]                  # optional
//! directory = "out"         # default "output"
//! emit_plot = true          # default true
//!
//! [thresholds]              # optional
//! lasing_guard = 1e-9
//! crossover_window = 1e-6
//! ```
//!
//! Unknown sections or keys are rejected. A table path is resolved relative
//! to the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::dielectric::{LorentzModel, TabulatedSusceptibility};
use crate::emission::DEFAULT_CROSSOVER_WINDOW;
use crate::slab::DEFAULT_LASING_GUARD;

pub const DEFAULT_TEMPERATURE_K: f64 = 300.0;
pub const DEFAULT_SQUEEZE_MAGNITUDE: f64 = 0.2;
pub const DEFAULT_OUTPUT_DIR: &str = "output";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid [{section}]: {message}")]
    Validation {
        section: &'static str,
        message: String,
    },
}

impl ConfigError {
    fn invalid(section: &'static str, message: impl Into<String>) -> Self {
        ConfigError::Validation {
            section,
            message: message.into(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grid: RawGrid,
    slab: RawSlab,
    medium: RawMedium,
    #[serde(default)]
    emission: RawEmission,
    #[serde(default)]
    squeeze: RawSqueeze,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    thresholds: RawThresholds,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    e_min_ev: f64,
    e_max_ev: f64,
    count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSlab {
    thickness_um: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawMedium {
    Lorentz {
        resonance_ev: f64,
        linewidth_ev: f64,
        oscillator_strength_ev2: Option<f64>,
        background: Option<f64>,
    },
    Table {
        path: PathBuf,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmission {
    temperature_k: Option<f64>,
    chemical_potential_ev: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSqueeze {
    magnitude: Option<f64>,
    phase_rad: Option<f64>,
    carrier_ev: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    directory: Option<PathBuf>,
    emit_plot: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    lasing_guard: Option<f64>,
    crossover_window: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub e_min_ev: f64,
    pub e_max_ev: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Medium {
    Lorentz(LorentzModel),
    Table {
        path: PathBuf,
        table: TabulatedSusceptibility,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionSpec {
    pub temperature_k: f64,
    pub chemical_potential_ev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeSpec {
    pub magnitude: f64,
    pub phase_rad: f64,
    pub carrier_ev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub directory: PathBuf,
    pub emit_plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub lasing_guard: f64,
    pub crossover_window: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            lasing_guard: DEFAULT_LASING_GUARD,
            crossover_window: DEFAULT_CROSSOVER_WINDOW,
        }
    }
}

/// A fully validated run configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub thickness_um: f64,
    pub medium: Medium,
    pub emission: EmissionSpec,
    pub squeeze: SqueezeSpec,
    pub output: OutputSpec,
    pub thresholds: Thresholds,
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    RunConfig::parse(&text, &path.display().to_string(), base)
}

fn finite(section: &'static str, name: &str, value: f64) -> Result<f64, ConfigError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ConfigError::invalid(
            section,
            format!("{name} must be finite, got {value}"),
        ))
    }
}

impl RunConfig {
    /// Parses config text. `origin` names the source in error messages and
    /// `base_dir` anchors relative table paths.
    pub fn parse(text: &str, origin: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            message: e.to_string().trim_end().to_string(),
        })?;

        let grid = GridSpec {
            e_min_ev: finite("grid", "e_min_ev", raw.grid.e_min_ev)?,
            e_max_ev: finite("grid", "e_max_ev", raw.grid.e_max_ev)?,
            count: raw.grid.count,
        };
        if grid.e_min_ev <= 0.0 {
            return Err(ConfigError::invalid("grid", "e_min_ev must be > 0"));
        }
        if grid.e_min_ev >= grid.e_max_ev {
            return Err(ConfigError::invalid(
                "grid",
                format!(
                    "e_min_ev ({}) must be below e_max_ev ({})",
                    grid.e_min_ev, grid.e_max_ev
                ),
            ));
        }
        if grid.count < 2 {
            return Err(ConfigError::invalid("grid", "count must be ≥ 2"));
        }

        let thickness_um = finite("slab", "thickness_um", raw.slab.thickness_um)?;
        if thickness_um <= 0.0 {
            return Err(ConfigError::invalid("slab", "thickness_um must be > 0"));
        }

        let medium = match raw.medium {
            RawMedium::Lorentz {
                resonance_ev,
                linewidth_ev,
                oscillator_strength_ev2,
                background,
            } => {
                let model = match oscillator_strength_ev2 {
                    Some(a) => LorentzModel::new(resonance_ev, linewidth_ev, a),
                    None => LorentzModel::with_peak_absorption(resonance_ev, linewidth_ev, 1.0),
                }
                .and_then(|m| m.with_background(background.unwrap_or(0.0)))
                .map_err(|e| ConfigError::invalid("medium", e.to_string()))?;
                Medium::Lorentz(model)
            }
            RawMedium::Table { path } => {
                let resolved = if path.is_absolute() {
                    path
                } else {
                    base_dir.join(path)
                };
                let table = TabulatedSusceptibility::from_path(&resolved).map_err(|e| {
                    ConfigError::Parse {
                        path: resolved.display().to_string(),
                        message: e.to_string(),
                    }
                })?;
                let (lo, hi) = table.span();
                if grid.e_min_ev < lo || grid.e_max_ev > hi {
                    return Err(ConfigError::invalid(
                        "medium",
                        format!(
                            "grid [{}, {}] eV exceeds the table span [{lo}, {hi}] eV",
                            grid.e_min_ev, grid.e_max_ev
                        ),
                    ));
                }
                Medium::Table {
                    path: resolved,
                    table,
                }
            }
        };

        let emission = EmissionSpec {
            temperature_k: finite(
                "emission",
                "temperature_k",
                raw.emission.temperature_k.unwrap_or(DEFAULT_TEMPERATURE_K),
            )?,
            chemical_potential_ev: finite(
                "emission",
                "chemical_potential_ev",
                raw.emission.chemical_potential_ev.unwrap_or(0.0),
            )?,
        };
        if emission.temperature_k <= 0.0 {
            return Err(ConfigError::invalid(
                "emission",
                "temperature_k must be > 0",
            ));
        }
        if emission.chemical_potential_ev < 0.0 {
            return Err(ConfigError::invalid(
                "emission",
                "chemical_potential_ev must be ≥ 0",
            ));
        }

        let default_carrier = match &medium {
            Medium::Lorentz(m) => m.resonance_ev,
            Medium::Table { .. } => 0.5 * (grid.e_min_ev + grid.e_max_ev),
        };
        let squeeze = SqueezeSpec {
            magnitude: finite(
                "squeeze",
                "magnitude",
                raw.squeeze.magnitude.unwrap_or(DEFAULT_SQUEEZE_MAGNITUDE),
            )?,
            phase_rad: finite("squeeze", "phase_rad", raw.squeeze.phase_rad.unwrap_or(0.0))?,
            carrier_ev: finite(
                "squeeze",
                "carrier_ev",
                raw.squeeze.carrier_ev.unwrap_or(default_carrier),
            )?,
        };
        if squeeze.magnitude < 0.0 {
            return Err(ConfigError::invalid("squeeze", "magnitude must be ≥ 0"));
        }
        if squeeze.carrier_ev < grid.e_min_ev || squeeze.carrier_ev > grid.e_max_ev {
            return Err(ConfigError::invalid(
                "squeeze",
                format!("carrier_ev {} lies outside the grid", squeeze.carrier_ev),
            ));
        }

        let output = OutputSpec {
            directory: raw
                .output
                .directory
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            emit_plot: raw.output.emit_plot.unwrap_or(true),
        };

        let defaults = Thresholds::default();
        let thresholds = Thresholds {
            lasing_guard: raw.thresholds.lasing_guard.unwrap_or(defaults.lasing_guard),
            crossover_window: raw
                .thresholds
                .crossover_window
                .unwrap_or(defaults.crossover_window),
        };
        for (name, v) in [
            ("lasing_guard", thresholds.lasing_guard),
            ("crossover_window", thresholds.crossover_window),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::invalid(
                    "thresholds",
                    format!("{name} must be > 0"),
                ));
            }
        }

        Ok(Self {
            grid,
            thickness_um,
            medium,
            emission,
            squeeze,
            output,
            thresholds,
        })
    }
}
