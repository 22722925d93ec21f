use std::path::Path;
use std::time::Instant;

use storyline_core::graph::{
    build_max_spanning_tree, connectivity_report, sparsify, write_cache, ConstraintSet, EdgeMask,
};
use storyline_core::{CoherenceProvider, ProviderMode};

use crate::args::BuildGraphArgs;
use crate::config::{ConfigOverrides, ExtractionConfig};
use crate::records::BuildReport;
use crate::{emit, fingerprint, load_full_corpus, require, to_json, write_file, CliError};

pub(crate) fn resolve(args: &BuildGraphArgs) -> Result<ExtractionConfig, CliError> {
    let mut config = ExtractionConfig::default();
    if let Some(path) = &args.common.config {
        ConfigOverrides::read(path)?.apply(&mut config);
    }
    ConfigOverrides {
        tau: args.tau,
        time_directed: args.time_directed.then_some(true),
        edge_mask_path: args.edge_mask.as_ref().map(|p| p.display().to_string()),
        centrality_mode: args.centrality,
        ..ConfigOverrides::default()
    }
    .apply(&mut config);
    config.validate()?;
    Ok(config)
}

pub(crate) fn run(args: &BuildGraphArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let config = resolve(args)?;
    let graph_path = require(&args.common.graph, "graph")?;
    let corpus = load_full_corpus(&args.common.corpus)?;
    let edge_mask = match &config.edge_mask_path {
        Some(p) => Some(EdgeMask::read_tsv(Path::new(p), corpus.documents())?),
        None => None,
    };
    let constraints = ConstraintSet {
        time_directed: config.time_directed,
        edge_mask,
        centrality: config.centrality_mode,
    };

    let coherence = CoherenceProvider::new(&corpus, ProviderMode::Materialized);
    let tree = build_max_spanning_tree(&coherence)?;
    let graph = sparsify(
        &coherence,
        &tree,
        config.tau,
        &constraints,
        corpus.documents(),
    )?;
    let cache = write_cache(&graph);
    write_file(graph_path, &cache)?;

    let components = connectivity_report(&graph);
    let elapsed = started.elapsed().as_secs_f64();
    eprintln!(
        "built graph: {} nodes, {} edges, omega {:.6}, {} component(s) in {elapsed:.2}s",
        graph.node_count(),
        graph.edge_count(),
        graph.omega(),
        components.count
    );
    let report = BuildReport {
        n: graph.node_count(),
        edge_count: graph.edge_count(),
        omega: graph.omega(),
        omega_multiplicity: tree.bottleneck_multiplicity(),
        components: components.count,
        component_sizes: components.sizes,
        wall_time_seconds: args.timing.then_some(elapsed),
        config,
        graph_fingerprint: fingerprint(&cache),
    };
    emit(args.common.out.as_deref(), &to_json(&report))
}
