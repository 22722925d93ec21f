//! Storyline extraction between two documents of a corpus.
//!
//! The pipeline is: load a [`Corpus`] of documents with their embedding
//! matrices, score document pairs with a [`CoherenceProvider`], build a
//! [`SparseCoherenceGraph`] around the bottleneck of the maximum spanning
//! tree, then extract a [`NarrativeTrail`] of node-disjoint widest paths.
//! The [`metrics`] module scores storylines and generates baselines.

pub mod coherence;
pub mod corpus;
pub mod graph;
pub mod metrics;
pub mod pathfind;

pub use coherence::{Coherence, CoherenceError, CoherenceMatrix, CoherenceProvider, ProviderMode};
pub use corpus::{load_corpus, validate_alignment, Corpus, CorpusError, Document, Matrix};
pub use graph::{
    build_max_spanning_tree, centrality_weights, connectivity_report, sparsify, CentralityMode,
    ConstraintSet, EdgeMask, GraphError, MaxSpanningTree, SparseCoherenceGraph,
};
pub use pathfind::{
    extract_trail, reduce_redundancy, widest_path, NarrativeTrail, PathError, Storyline,
};
