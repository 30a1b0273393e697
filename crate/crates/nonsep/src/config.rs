//! JSON scenario files: one `mode` key selecting the job plus mode-specific
//! parameters, rejected on any unknown key.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::grid::{Grid, GridError};
use crate::states::Statistics;

/// Reasons a configuration cannot be used.
#[derive(Debug, Error)]
pub enum ConfigError {
    /// The file could not be read.
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// The JSON is malformed or has wrong or unknown keys.
    #[error("config parse error: {0}")]
    Parse(String),
    /// The mode label is not one of the supported jobs.
    #[error("unknown config mode {0:?}")]
    UnknownMode(String),
    /// The config's mode does not match the invoked subcommand.
    #[error("config mode {config:?} does not match subcommand {subcommand:?}")]
    ModeMismatch { config: String, subcommand: String },
    /// A grid specification is invalid.
    #[error("{0}")]
    Grid(#[from] GridError),
    /// A flag or list value is invalid.
    #[error("invalid {name}: {detail}")]
    Invalid { name: String, detail: String },
    /// A required parameter is absent for the requested mode.
    #[error("missing required {name} for mode {mode}")]
    Missing { name: &'static str, mode: &'static str },
}

/// Complex number written either as a bare real or as a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    /// Numeric value.
    pub fn to_complex(self) -> Complex64 {
        match self {
            ComplexValue::Real(re) => Complex64::new(re, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Grid written as an object with explicit fields.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridConfig {
    /// Validated grid.
    pub fn to_grid(self) -> Result<Grid, GridError> {
        Grid::new(self.start, self.stop, self.steps)
    }
}

/// Parameters for a single absorption probability of a path-entangled pair.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntangledAbsorptionConfig {
    pub mode: String,
    pub alpha: ComplexValue,
    pub gamma: ComplexValue,
    pub beta: Option<ComplexValue>,
    pub delta: Option<ComplexValue>,
}

/// Parameters for an emission curve of a path-entangled pair.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntangledEmissionConfig {
    pub mode: String,
    pub tau_a: Option<f64>,
    pub tau_b: Option<f64>,
    pub m_nt_a: Option<ComplexValue>,
    pub m_nt_b: Option<ComplexValue>,
    pub grid: Option<GridConfig>,
}

/// Parameters for the default emission curve job.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig1Config {
    pub mode: String,
    pub tau_a: Option<f64>,
    pub tau_b: Option<f64>,
    pub grid: Option<GridConfig>,
}

/// Parameters for the overlap sweep job.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2Config {
    pub mode: String,
    pub tilde_overlaps: Option<Vec<f64>>,
    pub grid: Option<GridConfig>,
}

/// Parameters for one identical-particle absorption scenario.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdenticalAbsorptionConfig {
    pub mode: String,
    pub statistics: Statistics,
    pub overlap_phi_psi: ComplexValue,
    pub overlap_psi_tilde_phi: ComplexValue,
    pub overlap_phi_tilde_phi: ComplexValue,
    pub overlap_psi_tilde_psi: ComplexValue,
    pub overlap_phi_tilde_psi: ComplexValue,
    pub overlap_psi_tilde_phi_tilde: ComplexValue,
    pub internal_amplitude: Option<ComplexValue>,
}

/// Parameters for one two-photon emission scenario.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdenticalEmissionConfig {
    pub mode: String,
    pub statistics: Statistics,
    pub m_phibar_phi: ComplexValue,
    pub m_psibar_psi: ComplexValue,
    pub m_phibar_psi: ComplexValue,
    pub m_psibar_phi: ComplexValue,
    pub initial_overlap: ComplexValue,
    pub final_overlap: ComplexValue,
}

/// Parameters for the random equivalence campaign.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub mode: String,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

/// Parsed configuration for any supported job.
#[derive(Debug, Clone)]
pub enum ScenarioConfig {
    EntangledAbsorption(EntangledAbsorptionConfig),
    EntangledEmission(EntangledEmissionConfig),
    Fig1(Fig1Config),
    Fig2(Fig2Config),
    IdenticalAbsorption(IdenticalAbsorptionConfig),
    IdenticalEmission(IdenticalEmissionConfig),
    Verify(VerifyConfig),
}

impl ScenarioConfig {
    /// Mode label the config was parsed under.
    pub fn mode_name(&self) -> &'static str {
        match self {
            ScenarioConfig::EntangledAbsorption(_) => "entangled-absorption",
            ScenarioConfig::EntangledEmission(_) => "entangled-emission",
            ScenarioConfig::Fig1(_) => "fig1",
            ScenarioConfig::Fig2(_) => "fig2",
            ScenarioConfig::IdenticalAbsorption(_) => "identical-absorption",
            ScenarioConfig::IdenticalEmission(_) => "identical-emission",
            ScenarioConfig::Verify(_) => "verify",
        }
    }
}

#[derive(Deserialize)]
struct ModeProbe {
    mode: String,
}

fn parse_mode_body<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
}

/// Parses a configuration document, selecting the schema by its `mode` key.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let probe: ModeProbe =
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    match probe.mode.as_str() {
        "entangled-absorption" => {
            Ok(ScenarioConfig::EntangledAbsorption(parse_mode_body(text)?))
        }
        "entangled-emission" => Ok(ScenarioConfig::EntangledEmission(parse_mode_body(text)?)),
        "fig1" => Ok(ScenarioConfig::Fig1(parse_mode_body(text)?)),
        "fig2" => Ok(ScenarioConfig::Fig2(parse_mode_body(text)?)),
        "identical-absorption" => {
            Ok(ScenarioConfig::IdenticalAbsorption(parse_mode_body(text)?))
        }
        "identical-emission" => Ok(ScenarioConfig::IdenticalEmission(parse_mode_body(text)?)),
        "verify" => Ok(ScenarioConfig::Verify(parse_mode_body(text)?)),
        other => Err(ConfigError::UnknownMode(other.to_string())),
    }
}

/// Loads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

/// Parses a comma-separated list of real overlaps, as given on the command line.
pub fn parse_overlap_list(s: &str) -> Result<Vec<f64>, ConfigError> {
    let values: Result<Vec<f64>, _> =
        s.split(',').map(|part| part.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if !v.is_empty() => Ok(v),
        Ok(_) => Err(ConfigError::Invalid {
            name: "tilde-overlap".to_string(),
            detail: "list is empty".to_string(),
        }),
        Err(e) => Err(ConfigError::Invalid {
            name: "tilde-overlap".to_string(),
            detail: format!("{e} in {s:?}"),
        }),
    }
}
