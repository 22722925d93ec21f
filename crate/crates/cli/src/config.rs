//! Run configuration: built-in defaults, overridden by an optional JSON
//! file, overridden by command-line flags.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use storyline_core::graph::{CentralityMode, ConstraintFlags};

use crate::error::CliError;

pub const DEFAULT_TAU: f64 = 1.0;
pub const DEFAULT_DELTA: f64 = 0.2;
pub const DEFAULT_K: usize = 3;

/// Every parameter that shapes an output, echoed into each file written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    pub tau: f64,
    pub delta: f64,
    pub k: usize,
    pub time_directed: bool,
    pub edge_mask_path: Option<String>,
    pub centrality_mode: CentralityMode,
    pub seed: u64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            tau: DEFAULT_TAU,
            delta: DEFAULT_DELTA,
            k: DEFAULT_K,
            time_directed: false,
            edge_mask_path: None,
            centrality_mode: CentralityMode::Off,
            seed: 0,
        }
    }
}

/// The same fields, all optional. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub tau: Option<f64>,
    pub delta: Option<f64>,
    pub k: Option<usize>,
    pub time_directed: Option<bool>,
    pub edge_mask_path: Option<String>,
    pub centrality_mode: Option<CentralityMode>,
    pub seed: Option<u64>,
}

impl ConfigOverrides {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
    }

    /// Fields set here replace those in `base`.
    pub fn apply(&self, base: &mut ExtractionConfig) {
        if let Some(v) = self.tau {
            base.tau = v;
        }
        if let Some(v) = self.delta {
            base.delta = v;
        }
        if let Some(v) = self.k {
            base.k = v;
        }
        if let Some(v) = self.time_directed {
            base.time_directed = v;
        }
        if let Some(v) = &self.edge_mask_path {
            base.edge_mask_path = Some(v.clone());
        }
        if let Some(v) = self.centrality_mode {
            base.centrality_mode = v;
        }
        if let Some(v) = self.seed {
            base.seed = v;
        }
    }

    /// Fields that a graph cache fixes, checked against its header.
    pub fn check_graph(&self, tau: f64, flags: ConstraintFlags) -> Result<(), CliError> {
        let clash = |what: &str, want: String, have: String| {
            CliError::input(format!(
                "config sets {what} = {want} but the graph was built with {have}"
            ))
        };
        if let Some(v) = self.tau.filter(|&v| v != tau) {
            return Err(clash("tau", v.to_string(), tau.to_string()));
        }
        if let Some(v) = self.time_directed.filter(|&v| v != flags.time_directed) {
            return Err(clash(
                "time_directed",
                v.to_string(),
                flags.time_directed.to_string(),
            ));
        }
        if let Some(v) = self.centrality_mode.filter(|&v| v != flags.centrality) {
            return Err(clash(
                "centrality_mode",
                v.to_string(),
                flags.centrality.to_string(),
            ));
        }
        if self.edge_mask_path.is_some() && !flags.masked {
            return Err(CliError::input(
                "config sets edge_mask_path but the graph was built without a mask",
            ));
        }
        Ok(())
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(CliError::input(format!(
                "tau must be >= 0, got {}",
                self.tau
            )));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(CliError::input(format!(
                "delta must be >= 0, got {}",
                self.delta
            )));
        }
        if self.k == 0 {
            return Err(CliError::input("k must be at least 1"));
        }
        Ok(())
    }
}
