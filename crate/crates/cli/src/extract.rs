use std::path::Path;

use rayon::prelude::*;
use storyline_core::pathfind::{extract_trail, reduce_redundancy, Storyline};
use storyline_core::{Document, SparseCoherenceGraph};

use crate::args::ExtractArgs;
use crate::config::{ConfigOverrides, ExtractionConfig};
use crate::records::{
    BatchDocument, FailedPair, PairOutcome, PathRecord, StorylineRecord, TrailBody, TrailDocument,
};
use crate::{
    check_node_count, emit, id_index, load_graph, read_text, require, resolve_id, to_json, CliError,
};

/// Config for a run against an existing graph: graph parameters come from
/// the cache header, the rest from defaults, file and flags.
pub(crate) fn resolve(
    args: &ExtractArgs,
    graph: &SparseCoherenceGraph,
) -> Result<ExtractionConfig, CliError> {
    let mut config = graph_config(graph);
    if let Some(path) = &args.common.config {
        let file = ConfigOverrides::read(path)?;
        file.check_graph(graph.tau(), graph.flags())?;
        file.apply(&mut config);
    }
    ConfigOverrides {
        k: args.k,
        delta: args.delta,
        ..ConfigOverrides::default()
    }
    .apply(&mut config);
    config.validate()?;
    Ok(config)
}

pub(crate) fn graph_config(graph: &SparseCoherenceGraph) -> ExtractionConfig {
    let flags = graph.flags();
    ExtractionConfig {
        tau: graph.tau(),
        time_directed: flags.time_directed,
        centrality_mode: flags.centrality,
        ..ExtractionConfig::default()
    }
}

fn ids(documents: &[Document], nodes: &[usize]) -> Vec<String> {
    nodes.iter().map(|&i| documents[i].id.clone()).collect()
}

fn path_record(documents: &[Document], s: &Storyline) -> PathRecord {
    PathRecord {
        ids: ids(documents, s.nodes()),
        weights: s.weights().to_vec(),
        bottleneck: s.bottleneck(),
        reliability: s.reliability(),
    }
}

pub(crate) fn trail_body(
    graph: &SparseCoherenceGraph,
    documents: &[Document],
    s: usize,
    t: usize,
    config: &ExtractionConfig,
    reduce: bool,
) -> Result<TrailBody, CliError> {
    let trail = extract_trail(graph, s, t, config.k)?;
    let storylines = trail
        .storylines
        .iter()
        .enumerate()
        .map(|(i, story)| {
            let original = path_record(documents, story);
            if reduce {
                let reduced = reduce_redundancy(story, graph, config.delta);
                StorylineRecord {
                    rank: i + 1,
                    path: path_record(documents, &reduced),
                    reduced: true,
                    unreduced: Some(original),
                }
            } else {
                StorylineRecord {
                    rank: i + 1,
                    path: original,
                    reduced: false,
                    unreduced: None,
                }
            }
        })
        .collect();
    Ok(TrailBody {
        source: documents[s].id.clone(),
        target: documents[t].id.clone(),
        requested: trail.requested,
        exhausted: trail.exhausted,
        storylines,
    })
}

fn read_pairs(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = read_text(path)?;
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None) if !a.is_empty() && !b.is_empty() => {
                pairs.push((a.to_string(), b.to_string()))
            }
            _ => {
                return Err(CliError::input(format!(
                    "{} line {}: expected \"src<TAB>dst\"",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(pairs)
}

pub(crate) fn run(args: &ExtractArgs) -> Result<(), CliError> {
    let docs_path = require(&args.common.corpus.docs, "docs")?;
    let documents = storyline_core::corpus::read_documents(docs_path)?;
    let (graph, graph_fingerprint) = load_graph(require(&args.common.graph, "graph")?)?;
    check_node_count(&graph, documents.len())?;
    let config = resolve(args, &graph)?;
    let index = id_index(&documents)?;
    let documents = documents.as_slice();

    let output = if let Some(pairs_path) = &args.pairs {
        let pairs = read_pairs(pairs_path)?
            .into_iter()
            .map(|(a, b)| {
                Ok((
                    resolve_id(&index, &a, "source")?,
                    resolve_id(&index, &b, "target")?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let trails = pairs
            .par_iter()
            .map(
                |&(s, t)| match trail_body(&graph, documents, s, t, &config, args.reduce) {
                    Ok(body) => PairOutcome::Trail(body),
                    Err(e) => PairOutcome::Failed(FailedPair {
                        source: documents[s].id.clone(),
                        target: documents[t].id.clone(),
                        error: e.to_string(),
                    }),
                },
            )
            .collect();
        to_json(&BatchDocument {
            trails,
            config,
            graph_fingerprint,
        })
    } else {
        let source = args
            .source
            .as_deref()
            .ok_or_else(|| CliError::input("missing required flag --source (or --pairs)"))?;
        let target = args
            .target
            .as_deref()
            .ok_or_else(|| CliError::input("missing required flag --target"))?;
        let s = resolve_id(&index, source, "source")?;
        let t = resolve_id(&index, target, "target")?;
        let trail = trail_body(&graph, documents, s, t, &config, args.reduce)?;
        to_json(&TrailDocument {
            trail,
            config,
            graph_fingerprint,
        })
    };
    emit(args.common.out.as_deref(), &output)
}
