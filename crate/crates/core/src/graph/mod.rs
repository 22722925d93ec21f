//! Sparse coherence graph construction.
//!
//! The complete coherence graph is never stored. A dense Prim pass finds its
//! maximum spanning tree and bottleneck weight `omega`; every ordered pair
//! whose coherence reaches `tau * omega` and passes the active constraints
//! becomes a directed edge.

mod cache;
mod centrality;
mod mst;

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherence::Coherence;
use crate::corpus::Document;

pub use cache::{read_cache, write_cache, GRAPH_CACHE_VERSION};
pub use centrality::{centrality_weights, closeness_centrality};
pub use mst::{build_max_spanning_tree, MaxSpanningTree, TreeEdge};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("a spanning tree needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("tau must be finite and non-negative, got {0}")]
    InvalidTau(f64),
    #[error("coherence covers {coherence} nodes but {documents} documents were given")]
    NodeCountMismatch { coherence: usize, documents: usize },
    #[error("time-directed graph requires a date on document {0:?}")]
    MissingDate(String),
    #[error("edge mask references unknown document id {0:?}")]
    UnknownMaskId(String),
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has weight {weight}, edges need a finite positive weight")]
    InvalidWeight { u: usize, v: usize, weight: f64 },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("graph cache line {line}: {message}")]
    CacheFormat { line: usize, message: String },
    #[error("edge mask line {line}: {message}")]
    MaskFormat { line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Which endpoint's closeness centrality scales an edge weight.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralityMode {
    #[default]
    Off,
    Source,
    Target,
}

impl fmt::Display for CentralityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CentralityMode::Off => "off",
            CentralityMode::Source => "source",
            CentralityMode::Target => "target",
        })
    }
}

impl FromStr for CentralityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(CentralityMode::Off),
            "source" => Ok(CentralityMode::Source),
            "target" => Ok(CentralityMode::Target),
            other => Err(format!(
                "unknown centrality mode {other:?}, expected off|source|target"
            )),
        }
    }
}

/// Directed pairs allowed to become edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeMask {
    allowed: HashSet<(usize, usize)>,
}

impl EdgeMask {
    pub fn from_indices(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self {
            allowed: pairs.into_iter().collect(),
        }
    }

    pub fn from_id_pairs<S: AsRef<str>>(
        documents: &[Document],
        pairs: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let lookup = |id: &str| {
            documents
                .iter()
                .position(|d| d.id == id)
                .ok_or_else(|| GraphError::UnknownMaskId(id.to_string()))
        };
        let allowed = pairs
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<_, GraphError>>()?;
        Ok(Self { allowed })
    }

    /// Reads a TSV of `src<TAB>dst` document id pairs.
    pub fn read_tsv(path: &Path, documents: &[Document]) -> Result<Self, GraphError> {
        let text = fs::read_to_string(path).map_err(|source| GraphError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(b), None) => pairs.push((a.trim(), b.trim())),
                _ => {
                    return Err(GraphError::MaskFormat {
                        line: i + 1,
                        message: "expected two tab-separated ids".into(),
                    })
                }
            }
        }
        Self::from_id_pairs(documents, &pairs)
    }

    pub fn allows(&self, u: usize, v: usize) -> bool {
        self.allowed.contains(&(u, v))
    }

    pub fn len(&self) -> usize {
        self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstraintSet {
    /// Only allow `u -> v` when `v` is dated strictly later than `u`.
    pub time_directed: bool,
    pub edge_mask: Option<EdgeMask>,
    pub centrality: CentralityMode,
}

impl ConstraintSet {
    pub fn flags(&self) -> ConstraintFlags {
        ConstraintFlags {
            time_directed: self.time_directed,
            masked: self.edge_mask.is_some(),
            centrality: self.centrality,
        }
    }
}

/// Record of the constraints a graph was built under.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFlags {
    pub time_directed: bool,
    pub masked: bool,
    pub centrality: CentralityMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub target: usize,
    pub weight: f64,
}

/// Directed weighted graph with sorted adjacency lists in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCoherenceGraph {
    out: Vec<Vec<Edge>>,
    inc: Vec<Vec<usize>>,
    tau: f64,
    omega: f64,
    flags: ConstraintFlags,
}

impl SparseCoherenceGraph {
    /// Builds a graph from explicit edges, rejecting self-loops, duplicates
    /// and weights that are not finite and positive.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
        tau: f64,
        omega: f64,
        flags: ConstraintFlags,
    ) -> Result<Self, GraphError> {
        let mut out: Vec<Vec<Edge>> = vec![Vec::new(); n];
        for (u, v, weight) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(GraphError::InvalidWeight { u, v, weight });
            }
            out[u].push(Edge { target: v, weight });
        }
        for (u, list) in out.iter_mut().enumerate() {
            list.sort_by_key(|e| e.target);
            if let Some(w) = list.windows(2).find(|w| w[0].target == w[1].target) {
                return Err(GraphError::DuplicateEdge { u, v: w[0].target });
            }
        }
        Ok(Self::from_sorted(out, tau, omega, flags))
    }

    fn from_sorted(out: Vec<Vec<Edge>>, tau: f64, omega: f64, flags: ConstraintFlags) -> Self {
        let mut inc = vec![Vec::new(); out.len()];
        for (u, list) in out.iter().enumerate() {
            for e in list {
                inc[e.target].push(u);
            }
        }
        Self {
            out,
            inc,
            tau,
            omega,
            flags,
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Bottleneck weight of the maximum spanning tree the graph was cut from.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn flags(&self) -> ConstraintFlags {
        self.flags
    }

    /// Outgoing edges of `u`, sorted by target.
    pub fn out_edges(&self, u: usize) -> &[Edge] {
        &self.out[u]
    }

    /// Sources of edges into `v`, ascending.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let list = self.out.get(u)?;
        list.binary_search_by_key(&v, |e| e.target)
            .ok()
            .map(|i| list[i].weight)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.weight(u, v).is_some()
    }

    /// All edges as `(u, v, w)`, ordered by `u` then `v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |e| (u, e.target, e.weight)))
    }

    pub(crate) fn map_weights(
        &self,
        f: impl Fn(usize, usize, f64) -> f64,
        flags: ConstraintFlags,
    ) -> Self {
        let out = self
            .out
            .iter()
            .enumerate()
            .map(|(u, list)| {
                list.iter()
                    .map(|e| Edge {
                        target: e.target,
                        weight: f(u, e.target, e.weight),
                    })
                    .filter(|e| e.weight > 0.0)
                    .collect()
            })
            .collect();
        Self::from_sorted(out, self.tau, self.omega, flags)
    }
}

/// Cuts the complete coherence graph down to the pairs with coherence at
/// least `tau * omega` that the constraints admit, then applies centrality
/// scaling when requested.
pub fn sparsify<C: Coherence + ?Sized>(
    coherence: &C,
    tree: &MaxSpanningTree,
    tau: f64,
    constraints: &ConstraintSet,
    documents: &[Document],
) -> Result<SparseCoherenceGraph, GraphError> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(GraphError::InvalidTau(tau));
    }
    let n = coherence.len();
    if documents.len() != n {
        return Err(GraphError::NodeCountMismatch {
            coherence: n,
            documents: documents.len(),
        });
    }
    let dates = if constraints.time_directed {
        let dates = documents
            .iter()
            .map(|d| d.date.ok_or_else(|| GraphError::MissingDate(d.id.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Some(dates)
    } else {
        None
    };
    let admits = |u: usize, v: usize| {
        dates.as_ref().is_none_or(|d| d[v] > d[u])
            && constraints
                .edge_mask
                .as_ref()
                .is_none_or(|m| m.allows(u, v))
    };

    let omega = tree.bottleneck();
    let threshold = tau * omega;
    let mut out: Vec<Vec<Edge>> = vec![Vec::new(); n];
    for u in 0..n {
        for v in u + 1..n {
            let weight = coherence.theta(u, v);
            if !(weight >= threshold && weight > 0.0) {
                continue;
            }
            if admits(u, v) {
                out[u].push(Edge { target: v, weight });
            }
            if admits(v, u) {
                out[v].push(Edge { target: u, weight });
            }
        }
    }
    for list in &mut out {
        list.sort_by_key(|e| e.target);
    }
    let mut flags = constraints.flags();
    flags.centrality = CentralityMode::Off;
    let graph = SparseCoherenceGraph::from_sorted(out, tau, omega, flags);
    Ok(match constraints.centrality {
        CentralityMode::Off => graph,
        mode => centrality_weights(&graph, mode),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub count: usize,
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
}

/// Weakly connected components of the graph, ignoring edge direction.
pub fn connectivity_report(graph: &SparseCoherenceGraph) -> ComponentReport {
    let n = graph.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v, _) in graph.edges() {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut sizes = vec![0usize; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        sizes[r] += 1;
    }
    let mut sizes: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    ComponentReport {
        count: sizes.len(),
        sizes,
    }
}
