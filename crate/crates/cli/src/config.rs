//! Scenario configuration files.
//!
//! A config is a flat JSON object. `p`, `q` and `n_su` accept either a
//! single value or a list; the scenario set is their Cartesian product.
//! Unknown fields are rejected.

use std::path::{Path, PathBuf};

use cri_core::analytic::{linspace, AnalyticError, ScenarioParams};
use cri_core::montecarlo::{SimConfig, DEFAULT_BINS};
use cri_core::Params;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Copy> OneOrMany<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

fn one() -> f64 {
    1.0
}
fn default_n_su() -> OneOrMany<u32> {
    OneOrMany::One(1)
}
fn default_samples() -> usize {
    1_000_000
}
fn default_seed() -> u64 {
    1
}
fn default_workers() -> usize {
    4
}
fn default_bins() -> usize {
    DEFAULT_BINS
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub p: OneOrMany<f64>,
    pub q: OneOrMany<f64>,
    #[serde(default = "one")]
    pub sigma2: f64,
    #[serde(default = "one")]
    pub lambda1: f64,
    #[serde(default = "one")]
    pub lambda2: f64,
    #[serde(default = "default_n_su")]
    pub n_su: OneOrMany<u32>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default)]
    pub figure: Option<u8>,
    #[serde(default)]
    pub psi_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub q_grid: Option<Vec<f64>>,
}

/// A named point of the scenario product.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub params: Params,
}

fn rate_suffix(params: &Params) -> String {
    if params.is_unit_rate() {
        String::new()
    } else {
        format!("_s{}_a{}_b{}", params.sigma2(), params.lambda1(), params.lambda2())
    }
}

/// File-name friendly identifier, e.g. `p4_q2_n1`.
pub fn scenario_id(params: &Params) -> String {
    format!("p{}_q{}_n{}{}", params.p(), params.q(), params.n_su(), rate_suffix(params))
}

/// Identifier of a `q` sweep: the scenario id without `q`.
pub fn sweep_id(params: &Params) -> String {
    format!("p{}_n{}{}", params.p(), params.n_su(), rate_suffix(params))
}

impl Scenario {
    pub fn new(params: Params) -> Self {
        Self { id: scenario_id(&params), params }
    }
}

fn check_grid(field: &str, grid: &[f64], lower: f64, strict_lower: bool) -> Result<(), ConfigError> {
    if grid.is_empty() {
        return Err(field_error(field, "grid is empty"));
    }
    for &v in grid {
        let below = if strict_lower { v <= lower } else { v < lower };
        if !v.is_finite() || below {
            let bound = if strict_lower { ">" } else { ">=" };
            return Err(field_error(field, format!("value {v} must be finite and {bound} {lower}")));
        }
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(field_error(field, "grid must be strictly increasing"));
    }
    Ok(())
}

impl Config {
    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::from_json(&text, &path.display().to_string())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if let Some(f) = self.figure {
            if !(2..=8).contains(&f) {
                return Err(field_error("figure", format!("{f} is not a figure id in 2..=8")));
            }
        }
        for (field, list) in [("p", self.p.values()), ("q", self.q.values())] {
            if list.is_empty() {
                return Err(field_error(field, "list is empty"));
            }
        }
        if self.n_su.values().is_empty() {
            return Err(field_error("n_su", "list is empty"));
        }
        self.try_scenarios()?;
        SimConfig::new(self.samples, self.seed, self.workers, self.bins)
            .map_err(|e| field_error("samples/workers/bins", e.to_string()))?;
        if let Some(g) = &self.psi_grid {
            check_grid("psi_grid", g, 0.0, false)?;
        }
        if let Some(g) = &self.q_grid {
            check_grid("q_grid", g, 0.0, true)?;
        }
        Ok(())
    }

    fn try_scenarios(&self) -> Result<Vec<Scenario>, ConfigError> {
        let mut out = Vec::new();
        for p in self.p.values() {
            for q in self.q.values() {
                for n in self.n_su.values() {
                    let params = ScenarioParams::new(p, q, self.sigma2, self.lambda1, self.lambda2, n)
                        .map_err(|e| match e {
                            AnalyticError::InvalidParameter { field, .. } => {
                                field_error(field, e.to_string())
                            }
                            other => field_error("scenario", other.to_string()),
                        })?;
                    out.push(Scenario::new(params));
                }
            }
        }
        Ok(out)
    }

    /// Scenarios in `p`-major, then `q`, then `n_su` order.
    pub fn scenarios(&self) -> Vec<Scenario> {
        self.try_scenarios().expect("validated at load")
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig::new(self.samples, self.seed, self.workers, self.bins).expect("validated at load")
    }

    /// Outage thresholds; defaults to 101 points on `[0, 10]`.
    pub fn psi_grid(&self) -> Vec<f64> {
        self.psi_grid.clone().unwrap_or_else(|| linspace(0.0, 10.0, 101))
    }

    /// Cap values for sweeps; defaults to 50 points on `[0.2, 10]`.
    pub fn q_grid(&self) -> Vec<f64> {
        self.q_grid.clone().unwrap_or_else(|| linspace(0.2, 10.0, 50))
    }
}
