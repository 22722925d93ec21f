//! JSON records written and read by the commands.

use serde::{Deserialize, Serialize};

use crate::config::ExtractionConfig;

/// Document ids of a path with its step weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub ids: Vec<String>,
    pub weights: Vec<f64>,
    pub bottleneck: f64,
    pub reliability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorylineRecord {
    /// 1 for the widest storyline.
    pub rank: usize,
    #[serde(flatten)]
    pub path: PathRecord,
    pub reduced: bool,
    /// The storyline before reduction, present when `reduced`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unreduced: Option<PathRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrailBody {
    pub source: String,
    pub target: String,
    pub requested: usize,
    pub exhausted: bool,
    pub storylines: Vec<StorylineRecord>,
}

/// Output of `extract` for one pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrailDocument {
    #[serde(flatten)]
    pub trail: TrailBody,
    pub config: ExtractionConfig,
    pub graph_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedPair {
    pub source: String,
    pub target: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairOutcome {
    Trail(TrailBody),
    Failed(FailedPair),
}

/// Output of `extract --pairs`, one entry per input line in file order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchDocument {
    pub trails: Vec<PairOutcome>,
    pub config: ExtractionConfig,
    pub graph_fingerprint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub n: usize,
    pub edge_count: usize,
    pub omega: f64,
    pub omega_multiplicity: usize,
    pub components: usize,
    pub component_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
    pub config: ExtractionConfig,
    pub graph_fingerprint: String,
}
