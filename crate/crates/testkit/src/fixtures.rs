use std::path::{Path, PathBuf};

use chrono::{Duration, TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use storyline_core::coherence::CoherenceMatrix;
use storyline_core::corpus::{write_documents, write_matrix, Corpus, Document, Matrix};
use storyline_core::graph::{ConstraintFlags, SparseCoherenceGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on `(0, 1]`.
pub fn unit_weight<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Random directed graph: each ordered pair is an edge with probability `p`.
pub fn random_digraph<R: Rng>(rng: &mut R, n: usize, p: f64) -> SparseCoherenceGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                edges.push((u, v, unit_weight(rng)));
            }
        }
    }
    SparseCoherenceGraph::from_edges(n, edges, 1.0, 0.0, ConstraintFlags::default()).unwrap()
}

/// Random connected undirected graph: a random tree plus each remaining
/// pair with probability `p`. Edges are `(u, v, w)` with `u < v`.
pub fn random_connected_undirected<R: Rng>(
    rng: &mut R,
    n: usize,
    p: f64,
) -> Vec<(usize, usize, f64)> {
    let mut present = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        present[u][v] = true;
        edges.push((u, v, unit_weight(rng)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random_bool(p) {
                edges.push((u, v, unit_weight(rng)));
            }
        }
    }
    edges
}

/// Coherence over an undirected edge list, 0 for absent pairs.
pub fn edge_list_coherence(n: usize, edges: &[(usize, usize, f64)]) -> CoherenceMatrix {
    let mut dense = vec![0.0; n * n];
    for &(u, v, w) in edges {
        dense[u * n + v] = w;
        dense[v * n + u] = w;
    }
    CoherenceMatrix::from_fn(n, |u, v| dense[u * n + v])
}

/// Random simple path of `len` distinct nodes.
pub fn random_simple_path<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, n, len).into_vec()
}

#[derive(Debug, Clone)]
pub struct ClusterCorpusParams {
    pub n: usize,
    pub clusters: usize,
    pub dim_hi: usize,
    pub dim_lo: usize,
    /// Standard deviation of points around their cluster center.
    pub spread: f64,
    /// Scale of the cluster centers.
    pub separation: f64,
    /// Attach one date per day in shuffled order.
    pub dated: bool,
    pub seed: u64,
}

impl Default for ClusterCorpusParams {
    fn default() -> Self {
        Self {
            n: 500,
            clusters: 6,
            dim_hi: 32,
            dim_lo: 2,
            spread: 1.0,
            separation: 3.0,
            dated: false,
            seed: 7,
        }
    }
}

fn gaussian_vec<R: Rng>(rng: &mut R, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            scale * z
        })
        .collect::<Vec<f64>>()
}

/// Documents drawn from Gaussian clusters.
///
/// Embeddings are `center + noise`; projections apply a fixed random linear
/// map; memberships are a softmax of negative squared distance to each
/// center, scaled by the spread.
pub fn gaussian_cluster_corpus(params: &ClusterCorpusParams) -> (Corpus, Vec<usize>) {
    let mut rng = rng(params.seed);
    let centers: Vec<Vec<f64>> = (0..params.clusters)
        .map(|_| gaussian_vec(&mut rng, params.dim_hi, params.separation))
        .collect();
    let projection: Vec<Vec<f64>> = (0..params.dim_lo)
        .map(|_| gaussian_vec(&mut rng, params.dim_hi, 1.0 / (params.dim_hi as f64).sqrt()))
        .collect();

    let mut labels = Vec::with_capacity(params.n);
    let mut emb = Vec::with_capacity(params.n);
    let mut proj = Vec::with_capacity(params.n);
    let mut memb = Vec::with_capacity(params.n);
    for _ in 0..params.n {
        let label = rng.random_range(0..params.clusters);
        let noise = gaussian_vec(&mut rng, params.dim_hi, params.spread);
        let z: Vec<f64> = centers[label]
            .iter()
            .zip(&noise)
            .map(|(c, e)| c + e)
            .collect();
        let zhat: Vec<f64> = projection
            .iter()
            .map(|row| row.iter().zip(&z).map(|(a, b)| a * b).sum())
            .collect();
        let logits: Vec<f64> = centers
            .iter()
            .map(|c| {
                let d2: f64 = c.iter().zip(&z).map(|(a, b)| (a - b).powi(2)).sum();
                -d2 / (2.0 * params.spread * params.spread * params.dim_hi as f64)
            })
            .collect();
        let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = exp.iter().sum();
        memb.push(exp.iter().map(|e| e / total).collect::<Vec<f64>>());
        labels.push(label);
        emb.push(z);
        proj.push(zhat);
    }

    let mut days: Vec<i64> = (0..params.n as i64).collect();
    if params.dated {
        for i in (1..days.len()).rev() {
            let j = rng.random_range(0..=i);
            days.swap(i, j);
        }
    }
    let epoch = Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap();
    let documents = (0..params.n)
        .map(|i| {
            let doc = Document::new(format!("doc{i:04}"));
            if params.dated {
                doc.with_date(epoch + Duration::days(days[i]))
            } else {
                doc
            }
        })
        .collect();
    let corpus = Corpus::new(
        documents,
        Matrix::from_rows(&emb).unwrap(),
        Matrix::from_rows(&proj).unwrap(),
        Matrix::from_rows(&memb).unwrap(),
    )
    .expect("synthetic corpus is valid");
    (corpus, labels)
}

/// Small unstructured corpus: Gaussian embeddings, random memberships.
pub fn random_corpus<R: Rng>(rng: &mut R, n: usize) -> Corpus {
    let dim_hi = 8;
    let clusters = 4;
    let emb: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vec(rng, dim_hi, 1.0)).collect();
    let proj: Vec<Vec<f64>> = (0..n).map(|_| gaussian_vec(rng, 2, 1.0)).collect();
    let memb: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let raw: Vec<f64> = (0..clusters).map(|_| unit_weight(rng)).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|x| x / total).collect()
        })
        .collect();
    let documents = (0..n).map(|i| Document::new(format!("r{i}"))).collect();
    Corpus::new(
        documents,
        Matrix::from_rows(&emb).unwrap(),
        Matrix::from_rows(&proj).unwrap(),
        Matrix::from_rows(&memb).unwrap(),
    )
    .expect("random corpus is valid")
}

#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub docs: PathBuf,
    pub embeddings: PathBuf,
    pub projections: PathBuf,
    pub memberships: PathBuf,
}

/// Writes the four corpus files into `dir` in the binary matrix format.
pub fn write_corpus(dir: &Path, corpus: &Corpus) -> CorpusPaths {
    let paths = CorpusPaths {
        docs: dir.join("documents.jsonl"),
        embeddings: dir.join("embeddings.ntm"),
        projections: dir.join("projections.ntm"),
        memberships: dir.join("memberships.ntm"),
    };
    write_documents(&paths.docs, corpus.documents()).unwrap();
    write_matrix(&paths.embeddings, corpus.embeddings()).unwrap();
    write_matrix(&paths.projections, corpus.projections()).unwrap();
    write_matrix(&paths.memberships, corpus.memberships()).unwrap();
    paths
}
