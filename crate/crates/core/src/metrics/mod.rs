//! Storyline evaluation and baselines.
//!
//! Scores always use base coherence from a [`Coherence`] source, never the
//! sparse graph weights, so baselines that step across non-edges still get
//! finite scores.

mod dtw;
mod report;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherence::Coherence;
use crate::corpus::Corpus;
use crate::pathfind::bottleneck_and_reliability;

pub use crate::pathfind::shortest_simple_path;
pub use dtw::{dtw_align, dtw_similarity, ndtw_distance, DtwAlignment};
pub use report::{EvaluationReport, EvaluationRow, CSV_COLUMNS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("storyline needs at least 2 documents, got {0}")]
    TooShort(usize),
    #[error("cannot align an empty sequence")]
    EmptySequence,
    #[error("point dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cosine similarity undefined for a zero vector")]
    ZeroVector,
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("source and target are the same node {0}")]
    SameEndpoints(usize),
    #[error("need {needed} interior documents but only {available} are eligible")]
    InsufficientNodes { needed: usize, available: usize },
    #[error("time-directed sampling requires a date on document {0:?}")]
    MissingDate(String),
    #[error("source {from:?} is not dated before target {to:?}")]
    DateOrder { from: String, to: String },
}

/// Which embedding matrix DTW metrics run on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DtwSpace {
    /// Low-dimensional projections.
    #[default]
    Lo,
    /// High-dimensional embeddings.
    Hi,
}

impl fmt::Display for DtwSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DtwSpace::Lo => "lo",
            DtwSpace::Hi => "hi",
        })
    }
}

impl FromStr for DtwSpace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lo" => Ok(DtwSpace::Lo),
            "hi" => Ok(DtwSpace::Hi),
            other => Err(format!("unknown DTW space {other:?}, expected lo|hi")),
        }
    }
}

impl DtwSpace {
    /// Points of the given documents in this space.
    pub fn points<'c>(self, corpus: &'c Corpus, nodes: &[usize]) -> Vec<&'c [f64]> {
        let m = match self {
            DtwSpace::Lo => corpus.projections(),
            DtwSpace::Hi => corpus.embeddings(),
        };
        nodes.iter().map(|&i| m.row(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StorylineScore {
    pub min_coherence: f64,
    /// Geometric mean of the step coherences.
    pub reliability: f64,
}

/// Minimum and geometric mean of base coherence over consecutive documents.
pub fn storyline_metrics<C: Coherence + ?Sized>(
    nodes: &[usize],
    coherence: &C,
) -> Result<StorylineScore, MetricsError> {
    if nodes.len() < 2 {
        return Err(MetricsError::TooShort(nodes.len()));
    }
    let n = coherence.len();
    if let Some(&node) = nodes.iter().find(|&&x| x >= n) {
        return Err(MetricsError::NodeOutOfRange { node, n });
    }
    let steps: Vec<f64> = nodes
        .windows(2)
        .map(|w| coherence.theta(w[0], w[1]))
        .collect();
    let (min_coherence, reliability) = bottleneck_and_reliability(&steps);
    Ok(StorylineScore {
        min_coherence,
        reliability,
    })
}

/// Random storyline of `length` documents from `s` to `t`.
///
/// Interior documents are drawn uniformly without replacement with a
/// ChaCha8 generator seeded by `seed`. When `time_directed`, only documents
/// dated strictly between `s` and `t` are eligible and the sample is sorted
/// by date; otherwise it keeps the sampled order.
pub fn random_baseline(
    corpus: &Corpus,
    s: usize,
    t: usize,
    length: usize,
    seed: u64,
    time_directed: bool,
) -> Result<Vec<usize>, MetricsError> {
    let n = corpus.len();
    for node in [s, t] {
        if node >= n {
            return Err(MetricsError::NodeOutOfRange { node, n });
        }
    }
    if s == t {
        return Err(MetricsError::SameEndpoints(s));
    }
    if length < 2 {
        return Err(MetricsError::TooShort(length));
    }
    let needed = length - 2;

    let mut eligible: Vec<usize> = (0..n).filter(|&x| x != s && x != t).collect();
    if time_directed {
        let dates = corpus
            .documents()
            .iter()
            .map(|d| {
                d.date
                    .ok_or_else(|| MetricsError::MissingDate(d.id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if dates[s] >= dates[t] {
            return Err(MetricsError::DateOrder {
                from: corpus.document(s).id.clone(),
                to: corpus.document(t).id.clone(),
            });
        }
        eligible.retain(|&x| dates[s] < dates[x] && dates[x] < dates[t]);
    }
    if eligible.len() < needed {
        return Err(MetricsError::InsufficientNodes {
            needed,
            available: eligible.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut interior: Vec<usize> = rand::seq::index::sample(&mut rng, eligible.len(), needed)
        .into_iter()
        .map(|i| eligible[i])
        .collect();
    if time_directed {
        let date = |x: usize| corpus.document(x).date;
        interior.sort_by_key(|&x| (date(x), x));
    }
    let mut path = Vec::with_capacity(length);
    path.push(s);
    path.extend(interior);
    path.push(t);
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::CoherenceMatrix;
    use crate::corpus::{Document, Matrix};
    use chrono::{TimeZone, Utc};

    #[test]
    fn metrics_from_base_coherence() {
        let c = CoherenceMatrix::from_fn(3, |u, v| match (u, v) {
            (0, 1) => 0.8,
            (1, 2) => 0.9,
            _ => 0.1,
        });
        let score = storyline_metrics(&[0, 1, 2], &c).unwrap();
        assert_eq!(score.min_coherence, 0.8);
        assert!((score.reliability - 0.72f64.sqrt()).abs() < 1e-12);
        assert!((score.reliability - 0.848528).abs() < 1e-6);
        let single = storyline_metrics(&[2, 0], &c).unwrap();
        assert_eq!((single.min_coherence, single.reliability), (0.1, 0.1));
        assert_eq!(storyline_metrics(&[1], &c), Err(MetricsError::TooShort(1)));
        assert!(matches!(
            storyline_metrics(&[0, 7], &c),
            Err(MetricsError::NodeOutOfRange { node: 7, .. })
        ));
    }

    fn dated_corpus(days: &[u32]) -> Corpus {
        let n = days.len();
        let docs = days
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                Document::new(format!("d{i}"))
                    .with_date(Utc.with_ymd_and_hms(2020, 1, d, 0, 0, 0).unwrap())
            })
            .collect();
        let emb: Vec<[f64; 3]> = (0..n).map(|i| [1.0, i as f64, 0.5]).collect();
        let proj: Vec<[f64; 1]> = (0..n).map(|i| [i as f64]).collect();
        let memb: Vec<[f64; 1]> = vec![[1.0]; n];
        Corpus::new(
            docs,
            Matrix::from_rows(&emb).unwrap(),
            Matrix::from_rows(&proj).unwrap(),
            Matrix::from_rows(&memb).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn random_baseline_shapes() {
        let c = dated_corpus(&[1, 2, 3, 4, 5, 6, 7, 8]);
        assert_eq!(random_baseline(&c, 0, 7, 2, 9, false).unwrap(), vec![0, 7]);
        let a = random_baseline(&c, 0, 7, 5, 42, false).unwrap();
        assert_eq!(a, random_baseline(&c, 0, 7, 5, 42, false).unwrap());
        assert_eq!(a.len(), 5);
        assert_eq!((a[0], a[4]), (0, 7));
        let mut interior = a[1..4].to_vec();
        interior.sort_unstable();
        interior.dedup();
        assert_eq!(interior.len(), 3);
        assert!(interior.iter().all(|&x| x != 0 && x != 7));
    }

    #[test]
    fn time_directed_full_permutation() {
        let c = dated_corpus(&[1, 5, 3, 2, 8, 4]);
        let p = random_baseline(&c, 0, 4, 6, 3, true).unwrap();
        assert_eq!(p, vec![0, 3, 2, 5, 1, 4]);
        // node 4 is the latest, so no full permutation ends anywhere else
        assert!(matches!(
            random_baseline(&c, 0, 1, 6, 3, true),
            Err(MetricsError::InsufficientNodes {
                needed: 4,
                available: 3
            })
        ));
        assert!(matches!(
            random_baseline(&c, 4, 0, 3, 3, true),
            Err(MetricsError::DateOrder { .. })
        ));
    }

    #[test]
    fn too_many_interior_nodes() {
        let c = dated_corpus(&[1, 2, 3]);
        assert_eq!(
            random_baseline(&c, 0, 2, 4, 0, false),
            Err(MetricsError::InsufficientNodes {
                needed: 2,
                available: 1
            })
        );
        assert_eq!(
            random_baseline(&c, 1, 1, 3, 0, false),
            Err(MetricsError::SameEndpoints(1))
        );
    }
}
