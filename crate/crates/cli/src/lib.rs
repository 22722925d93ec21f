//! Command-line front end: `build-graph`, `extract` and `evaluate`.
//!
//! Outputs are deterministic for fixed inputs and seeds. Each one carries
//! the resolved [`ExtractionConfig`] and the SHA-256 of the graph cache it
//! was computed from.

pub mod args;
pub mod config;
mod error;
pub mod records;

mod build;
mod evaluate;
mod extract;

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use storyline_core::graph::read_cache;
use storyline_core::{load_corpus, Corpus, Document, SparseCoherenceGraph};

pub use args::{Cli, Command};
pub use config::ExtractionConfig;
pub use error::CliError;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::BuildGraph(a) => build::run(a),
        Command::Extract(a) => extract::run(a),
        Command::Evaluate(a) => evaluate::run(a),
    }
}

/// Hex SHA-256 of the cache text.
pub fn fingerprint(cache: &str) -> String {
    Sha256::digest(cache.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn require<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::input(format!("missing required flag --{flag}")))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_full_corpus(c: &args::CorpusArgs) -> Result<Corpus, CliError> {
    Ok(load_corpus(
        require(&c.docs, "docs")?,
        require(&c.embeddings, "embeddings")?,
        require(&c.projections, "projections")?,
        require(&c.memberships, "memberships")?,
    )?)
}

/// The parsed graph with the fingerprint of its cache.
fn load_graph(path: &Path) -> Result<(SparseCoherenceGraph, String), CliError> {
    let text = read_text(path)?;
    let graph =
        read_cache(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok((graph, fingerprint(&text)))
}

fn check_node_count(graph: &SparseCoherenceGraph, documents: usize) -> Result<(), CliError> {
    if graph.node_count() != documents {
        return Err(CliError::input(format!(
            "graph has {} nodes but the corpus has {documents} documents",
            graph.node_count()
        )));
    }
    Ok(())
}

fn id_index(documents: &[Document]) -> Result<HashMap<&str, usize>, CliError> {
    let mut index = HashMap::with_capacity(documents.len());
    for (i, d) in documents.iter().enumerate() {
        if index.insert(d.id.as_str(), i).is_some() {
            return Err(CliError::input(format!("duplicate document id {:?}", d.id)));
        }
    }
    Ok(index)
}

fn resolve_id(index: &HashMap<&str, usize>, id: &str, what: &str) -> Result<usize, CliError> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| CliError::input(format!("unknown {what} id {id:?}")))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("records serialize");
    text.push('\n');
    text
}

/// Writes to `out`, or to standard output when it is `None`.
fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}
