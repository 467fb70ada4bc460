//! Sweep configuration: TOML file, flag overrides, validation.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thermal_cluster_core::{linear_graph, Graph};

use crate::Error;

/// A field-level validation failure.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            message: message.into(),
        }
    }
}

/// The sweep axis: dephasing strengths or temperatures `T/Δ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    P(Vec<f64>),
    T(Vec<f64>),
}

impl Grid {
    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.values().is_empty()
    }

    pub fn values(&self) -> &[f64] {
        match self {
            Grid::P(v) | Grid::T(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub graph: Graph,
    pub alpha: f64,
    pub grid: Grid,
    /// Expected counts per projector at unit probability.
    pub flux: f64,
    pub mc_samples: usize,
    pub seed: u64,
    pub tomography_enabled: bool,
}

pub const DEFAULT_FLUX: f64 = 1e4;
pub const DEFAULT_MC_SAMPLES: usize = 50;

/// Every field optional, as read from a file or from flags.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub graph: Option<String>,
    pub alpha: Option<f64>,
    pub p_grid: Option<Vec<f64>>,
    pub t_grid: Option<Vec<f64>>,
    pub flux: Option<f64>,
    pub mc_samples: Option<i64>,
    pub seed: Option<u64>,
    pub tomography_enabled: Option<bool>,
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::new("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_toml(&text)?)
    }

    /// Fields set in `over` replace those in `self`. A grid in `over`
    /// replaces both grids of `self`.
    pub fn merge(self, over: RawConfig) -> RawConfig {
        let grid_override = over.p_grid.is_some() || over.t_grid.is_some();
        RawConfig {
            graph: over.graph.or(self.graph),
            alpha: over.alpha.or(self.alpha),
            p_grid: if grid_override { over.p_grid } else { self.p_grid },
            t_grid: if grid_override { over.t_grid } else { self.t_grid },
            flux: over.flux.or(self.flux),
            mc_samples: over.mc_samples.or(self.mc_samples),
            seed: over.seed.or(self.seed),
            tomography_enabled: over.tomography_enabled.or(self.tomography_enabled),
        }
    }

    pub fn validate(self) -> Result<SweepConfig, ConfigError> {
        let graph = match &self.graph {
            None => linear_graph(3).expect("three-vertex chain"),
            Some(text) => text
                .parse::<Graph>()
                .map_err(|e| ConfigError::new("graph", e.to_string()))?,
        };
        if graph != linear_graph(3).expect("three-vertex chain") {
            return Err(ConfigError::new(
                "graph",
                format!("sweeps analyse the three-qubit chain \"3; 0-1,1-2\", got \"{graph}\""),
            ));
        }

        let alpha = self.alpha.unwrap_or(PI);
        if !alpha.is_finite() {
            return Err(ConfigError::new("alpha", format!("must be finite, got {alpha}")));
        }

        let grid = match (self.p_grid, self.t_grid) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new("p_grid", "give exactly one of p_grid and t_grid, not both"))
            }
            (None, None) => return Err(ConfigError::new("p_grid", "give exactly one of p_grid and t_grid")),
            (Some(v), None) => {
                check_grid("p_grid", &v, |p| (0.0..=1.0).contains(&p), "within [0, 1]")?;
                Grid::P(v)
            }
            (None, Some(v)) => {
                check_grid("t_grid", &v, |t| t >= 0.0, "non-negative (inf allowed)")?;
                Grid::T(v)
            }
        };

        let tomography_enabled = self.tomography_enabled.unwrap_or(false);
        let flux = self.flux.unwrap_or(DEFAULT_FLUX);
        if !(flux.is_finite() && flux > 0.0) {
            return Err(ConfigError::new("flux", format!("must be positive and finite, got {flux}")));
        }
        let mc_samples = self.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES as i64);
        if mc_samples < 0 {
            return Err(ConfigError::new("mc_samples", format!("must be non-negative, got {mc_samples}")));
        }
        if tomography_enabled && mc_samples < 2 {
            return Err(ConfigError::new(
                "mc_samples",
                format!("must be at least 2 when tomography is enabled, got {mc_samples}"),
            ));
        }

        Ok(SweepConfig {
            graph,
            alpha,
            grid,
            flux,
            mc_samples: mc_samples as usize,
            seed: self.seed.unwrap_or(0),
            tomography_enabled,
        })
    }
}

fn check_grid(field: &'static str, values: &[f64], ok: impl Fn(f64) -> bool, domain: &str) -> Result<(), ConfigError> {
    if values.is_empty() {
        return Err(ConfigError::new(field, "must not be empty"));
    }
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() || !ok(v) {
            return Err(ConfigError::new(field, format!("entry {i} = {v} is not {domain}")));
        }
    }
    Ok(())
}

impl SweepConfig {
    /// Stable text form, one `key = value` line per field.
    pub fn canonical(&self) -> String {
        let (key, values) = match &self.grid {
            Grid::P(v) => ("p_grid", v),
            Grid::T(v) => ("t_grid", v),
        };
        format!(
            "graph = \"{}\"\nalpha = {:?}\n{key} = {:?}\nflux = {:?}\nmc_samples = {}\nseed = {}\ntomography_enabled = {}\n",
            self.graph, self.alpha, values, self.flux, self.mc_samples, self.seed, self.tomography_enabled
        )
    }

    /// SHA-256 of [`SweepConfig::canonical`], lowercase hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl fmt::Display for SweepConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}
