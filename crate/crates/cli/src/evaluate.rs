use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use storyline_core::corpus::read_matrix;
use storyline_core::metrics::{
    dtw_align, dtw_similarity, ndtw_distance, random_baseline, shortest_simple_path,
    storyline_metrics, DtwSpace, EvaluationReport, EvaluationRow,
};
use storyline_core::{CoherenceProvider, Corpus, Matrix, ProviderMode, SparseCoherenceGraph};

use crate::args::EvaluateArgs;
use crate::config::{ConfigOverrides, ExtractionConfig};
use crate::records::{BatchDocument, PairOutcome, TrailBody, TrailDocument};
use crate::{
    check_node_count, id_index, load_full_corpus, load_graph, read_text, require, resolve_id,
    to_json, write_file, CliError,
};

pub const REPORT_JSON: &str = "evaluation.json";
pub const REPORT_CSV: &str = "evaluation.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Baseline {
    Random,
    Shortest,
}

fn parse_baselines(names: &[String]) -> Result<Vec<Baseline>, CliError> {
    let mut out = Vec::new();
    for name in names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let b = match name {
            "random" => Baseline::Random,
            "shortest" => Baseline::Shortest,
            other => {
                return Err(CliError::input(format!(
                    "unknown baseline {other:?}, expected random or shortest"
                )))
            }
        };
        if !out.contains(&b) {
            out.push(b);
        }
    }
    Ok(out)
}

struct TrailInput {
    /// One entry per pair; `None` for pairs that failed at extraction.
    pairs: Vec<Option<TrailBody>>,
    config: ExtractionConfig,
    graph_fingerprint: String,
}

fn read_trail(path: &Path) -> Result<TrailInput, CliError> {
    let text = read_text(path)?;
    let bad = |e: serde_json::Error| CliError::input(format!("trail {}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).map_err(bad)?;
    if value.get("trails").is_some() {
        let batch: BatchDocument = serde_json::from_value(value).map_err(bad)?;
        let pairs = batch
            .trails
            .into_iter()
            .map(|p| match p {
                PairOutcome::Trail(body) => Some(body),
                PairOutcome::Failed(_) => None,
            })
            .collect();
        Ok(TrailInput {
            pairs,
            config: batch.config,
            graph_fingerprint: batch.graph_fingerprint,
        })
    } else {
        let doc: TrailDocument = serde_json::from_value(value).map_err(bad)?;
        Ok(TrailInput {
            pairs: vec![Some(doc.trail)],
            config: doc.config,
            graph_fingerprint: doc.graph_fingerprint,
        })
    }
}

/// Reference ids: a trail document's first storyline, or a JSON array.
fn read_reference(path: &Path) -> Result<Vec<String>, CliError> {
    let text = read_text(path)?;
    let bad = |e: serde_json::Error| CliError::input(format!("reference {}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).map_err(bad)?;
    let ids = if value.is_array() {
        serde_json::from_value::<Vec<String>>(value).map_err(bad)?
    } else {
        let doc: TrailDocument = serde_json::from_value(value).map_err(bad)?;
        doc.trail
            .storylines
            .into_iter()
            .next()
            .map(|s| s.path.ids)
            .unwrap_or_default()
    };
    if ids.is_empty() {
        return Err(CliError::input(format!(
            "reference {} has no documents",
            path.display()
        )));
    }
    Ok(ids)
}

/// Two coordinates per document: the display matrix when given, otherwise
/// the leading projection columns, zero-padded.
fn display_coordinates(corpus: &Corpus, display: Option<&Matrix>) -> Vec<[f64; 2]> {
    let m = display.unwrap_or(corpus.projections());
    m.iter_rows()
        .map(|r| {
            [
                r.first().copied().unwrap_or(0.0),
                r.get(1).copied().unwrap_or(0.0),
            ]
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct RowRecord {
    #[serde(flatten)]
    row: EvaluationRow,
    coordinates: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize)]
struct EvaluationDocument {
    dtw_space: Option<DtwSpace>,
    reference: Option<Vec<String>>,
    rows: Vec<RowRecord>,
    config: ExtractionConfig,
    graph_fingerprint: String,
}

struct Scorer<'a> {
    corpus: &'a Corpus,
    coherence: CoherenceProvider<'a>,
    reference: Option<(DtwSpace, Vec<usize>)>,
    coordinates: Vec<[f64; 2]>,
}

impl Scorer<'_> {
    fn row(
        &self,
        method: &str,
        pair: usize,
        storyline: usize,
        nodes: &[usize],
    ) -> Result<RowRecord, CliError> {
        let score = storyline_metrics(nodes, &self.coherence)?;
        let (dtw_similarity, ndtw) = match &self.reference {
            Some((space, reference)) => {
                let a = space.points(self.corpus, nodes);
                let b = space.points(self.corpus, reference);
                let alignment = dtw_align(&a, &b)?;
                (
                    Some(dtw_similarity(&a, &b, &alignment)?),
                    Some(ndtw_distance(&alignment)),
                )
            }
            None => (None, None),
        };
        Ok(RowRecord {
            row: EvaluationRow {
                method: method.to_string(),
                pair,
                storyline,
                length: nodes.len(),
                min_coherence: score.min_coherence,
                reliability: score.reliability,
                dtw_similarity,
                ndtw_distance: ndtw,
                ids: nodes
                    .iter()
                    .map(|&i| self.corpus.document(i).id.clone())
                    .collect(),
            },
            coordinates: nodes.iter().map(|&i| self.coordinates[i]).collect(),
        })
    }
}

fn resolve_config(
    args: &EvaluateArgs,
    trail: &TrailInput,
    graph: &SparseCoherenceGraph,
) -> Result<ExtractionConfig, CliError> {
    let mut config = trail.config.clone();
    if let Some(path) = &args.common.config {
        let file = ConfigOverrides::read(path)?;
        file.check_graph(graph.tau(), graph.flags())?;
        file.apply(&mut config);
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

pub(crate) fn run(args: &EvaluateArgs) -> Result<(), CliError> {
    let out_dir = require(&args.common.out, "out")?;
    let trail_path = require(&args.trail, "trail")?;
    let baselines = parse_baselines(&args.baselines)?;
    if args.dtw_space.is_some() && args.reference.is_none() {
        return Err(CliError::input("DTW metrics need a --reference trail"));
    }

    let corpus = load_full_corpus(&args.common.corpus)?;
    let (graph, graph_fingerprint) = load_graph(require(&args.common.graph, "graph")?)?;
    check_node_count(&graph, corpus.len())?;
    let trail = read_trail(trail_path)?;
    if trail.graph_fingerprint != graph_fingerprint {
        return Err(CliError::input(format!(
            "trail {} was extracted from a different graph",
            trail_path.display()
        )));
    }
    let config = resolve_config(args, &trail, &graph)?;
    let index = id_index(corpus.documents())?;
    let resolve_all = |ids: &[String], what: &str| -> Result<Vec<usize>, CliError> {
        ids.iter().map(|id| resolve_id(&index, id, what)).collect()
    };

    let reference = match &args.reference {
        Some(path) => {
            let ids = read_reference(path)?;
            Some((
                args.dtw_space.unwrap_or_default(),
                resolve_all(&ids, "reference")?,
            ))
        }
        None => None,
    };
    let display = match &args.display {
        Some(path) => {
            let m = read_matrix(path)?;
            if m.rows() != corpus.len() || m.cols() != 2 {
                return Err(CliError::input(format!(
                    "display matrix {} is {}x{}, expected {}x2",
                    path.display(),
                    m.rows(),
                    m.cols(),
                    corpus.len()
                )));
            }
            Some(m)
        }
        None => None,
    };
    let scorer = Scorer {
        corpus: &corpus,
        coherence: CoherenceProvider::new(&corpus, ProviderMode::Lazy),
        coordinates: display_coordinates(&corpus, display.as_ref()),
        reference,
    };

    let mut rows = Vec::new();
    for (pair, body) in trail.pairs.iter().enumerate() {
        let Some(body) = body else {
            eprintln!("pair {pair}: no trail to evaluate");
            continue;
        };
        let s = resolve_id(&index, &body.source, "source")?;
        let t = resolve_id(&index, &body.target, "target")?;
        let mut first_len = None;
        for story in &body.storylines {
            if story.path.ids.len() < 2 {
                return Err(CliError::input(format!(
                    "storyline {} of pair {pair} ({} -> {}) has {} document(s), need at least 2",
                    story.rank,
                    body.source,
                    body.target,
                    story.path.ids.len()
                )));
            }
            let nodes = resolve_all(&story.path.ids, "storyline")?;
            first_len.get_or_insert(nodes.len());
            rows.push(scorer.row("narrative_trail", pair, story.rank, &nodes)?);
        }
        for baseline in &baselines {
            match baseline {
                Baseline::Shortest => match shortest_simple_path(&graph, s, t) {
                    Ok(nodes) => rows.push(scorer.row("shortest", pair, 1, &nodes)?),
                    Err(e) => eprintln!("pair {pair}: shortest baseline skipped: {e}"),
                },
                Baseline::Random => {
                    let length = first_len.unwrap_or(2);
                    let seed = config.seed.wrapping_add(pair as u64);
                    match random_baseline(&corpus, s, t, length, seed, config.time_directed) {
                        Ok(nodes) => rows.push(scorer.row("random", pair, 1, &nodes)?),
                        Err(e) => eprintln!("pair {pair}: random baseline skipped: {e}"),
                    }
                }
            }
        }
    }

    let dtw_space = scorer.reference.as_ref().map(|r| r.0);
    let reference_ids = scorer.reference.as_ref().map(|(_, nodes)| {
        nodes
            .iter()
            .map(|&i| corpus.document(i).id.clone())
            .collect()
    });
    let report = EvaluationReport {
        dtw_space,
        rows: rows.iter().map(|r| r.row.clone()).collect(),
    };
    let config_json = serde_json::to_string(&config).expect("config serializes");
    let mut preamble = vec![
        format!("config {config_json}"),
        format!("graph_fingerprint {graph_fingerprint}"),
    ];
    if let Some(space) = dtw_space {
        preamble.push(format!("dtw_space {space}"));
    }
    write_file(&out_dir.join(REPORT_CSV), &report.to_csv(&preamble))?;
    let doc = EvaluationDocument {
        dtw_space,
        reference: reference_ids,
        rows,
        config,
        graph_fingerprint,
    };
    write_file(&out_dir.join(REPORT_JSON), &to_json(&doc))
}
