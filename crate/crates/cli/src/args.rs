use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use storyline_core::graph::CentralityMode;
use storyline_core::metrics::DtwSpace;

#[derive(Debug, Parser)]
#[command(
    name = "storyline",
    version,
    about = "Extract storylines between documents"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the sparse coherence graph and write its cache.
    BuildGraph(BuildGraphArgs),
    /// Extract the top storylines between a source and a target.
    Extract(ExtractArgs),
    /// Score storylines and baselines.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CorpusArgs {
    /// Documents, one JSON object per line.
    #[arg(long)]
    pub docs: Option<PathBuf>,
    /// High-dimensional embedding matrix.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Low-dimensional projection matrix.
    #[arg(long)]
    pub projections: Option<PathBuf>,
    /// Soft cluster membership matrix.
    #[arg(long)]
    pub memberships: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Graph cache file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Output location; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file of configuration values; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BuildGraphArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Keep pairs with coherence at least tau times the spanning-tree bottleneck.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Only link a document to strictly later documents.
    #[arg(long)]
    pub time_directed: bool,
    /// Allowed pairs, one "src<TAB>dst" id pair per line.
    #[arg(long)]
    pub edge_mask: Option<PathBuf>,
    /// Scale edge weights by closeness centrality; bare flag means source.
    #[arg(long, value_name = "off|source|target", num_args = 0..=1, default_missing_value = "source")]
    pub centrality: Option<CentralityMode>,
    /// Include wall time in the build report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    /// Number of storylines.
    #[arg(long)]
    pub k: Option<usize>,
    /// Remove redundant documents from each storyline.
    #[arg(long)]
    pub reduce: bool,
    /// Coherence loss tolerated by reduction.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Batch file of "src<TAB>dst" id pairs.
    #[arg(long, conflicts_with_all = ["source", "target"])]
    pub pairs: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Trail JSON written by `extract`.
    #[arg(long)]
    pub trail: Option<PathBuf>,
    /// Reference trail JSON or JSON array of ids, for DTW columns.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Comma-separated baselines: random, shortest.
    #[arg(long, value_delimiter = ',')]
    pub baselines: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Space DTW columns are computed in.
    #[arg(long, value_name = "lo|hi")]
    pub dtw_space: Option<DtwSpace>,
    /// Two-column matrix of display coordinates.
    #[arg(long)]
    pub display: Option<PathBuf>,
}
