//! Pairwise document coherence.
//!
//! Base coherence is the geometric mean of the angular similarity of two
//! embeddings and the topic similarity `1 - JSD` of their cluster
//! membership distributions:
//!
//! ```text
//! theta(u, v) = sqrt( (1 - acos(cos_sim(z_u, z_v)) / pi) * (1 - JSD(h_u, h_v)) )
//! ```
//!
//! JSD uses base-2 logarithms so both factors lie in `[0, 1]`.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{Corpus, SIMPLEX_TOLERANCE};

/// Node count above which a provider never materializes its matrix.
pub const DEFAULT_MATERIALIZE_LIMIT: usize = 8192;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoherenceError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("distribution sums to {sum}, not 1")]
    OffSimplex { sum: f64 },
    #[error("document index {index} out of range for {len} documents")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Symmetric pairwise coherence over `len()` nodes.
pub trait Coherence: Sync {
    fn len(&self) -> usize;

    /// Coherence of the unordered pair `{u, v}`.
    fn theta(&self, u: usize, v: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when every pair is stored, so callers may cache freely.
    fn is_materialized(&self) -> bool {
        false
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `cos = dot / sqrt(|a|^2 |b|^2)` keeps `cos(z, z)` at exactly 1.
fn angular_from_parts(dot_ab: f64, sq_a: f64, sq_b: f64) -> f64 {
    let cos = (dot_ab / (sq_a * sq_b).sqrt()).clamp(-1.0, 1.0);
    1.0 - cos.acos() / PI
}

fn jsd_base2(p: &[f64], q: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        let m = 0.5 * (pi + qi);
        let mut term = 0.0;
        if pi > 0.0 {
            term += pi * (pi / m).log2();
        }
        if qi > 0.0 {
            term += qi * (qi / m).log2();
        }
        total += 0.5 * term;
    }
    total.clamp(0.0, 1.0)
}

/// Angular similarity `1 - acos(cos_sim) / pi`, in `[0, 1]`.
pub fn angular_similarity(a: &[f64], b: &[f64]) -> Result<f64, CoherenceError> {
    if a.len() != b.len() {
        return Err(CoherenceError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (sq_a, sq_b) = (dot(a, a), dot(b, b));
    if sq_a == 0.0 || sq_b == 0.0 {
        return Err(CoherenceError::ZeroVector);
    }
    Ok(angular_from_parts(dot(a, b), sq_a, sq_b))
}

fn check_distribution(p: &[f64]) -> Result<(), CoherenceError> {
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, v)| v.is_nan() || **v < 0.0) {
        return Err(CoherenceError::NegativeProbability { index, value });
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
        return Err(CoherenceError::OffSimplex { sum });
    }
    Ok(())
}

/// Topic similarity `1 - JSD(p, q)` with base-2 JSD, in `[0, 1]`.
pub fn topic_similarity(p: &[f64], q: &[f64]) -> Result<f64, CoherenceError> {
    if p.len() != q.len() {
        return Err(CoherenceError::DimensionMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    check_distribution(p)?;
    check_distribution(q)?;
    Ok(1.0 - jsd_base2(p, q))
}

/// Base coherence of documents `u` and `v`, evaluated in index order so the
/// result is bit-identical for `(u, v)` and `(v, u)`.
pub fn base_coherence(corpus: &Corpus, u: usize, v: usize) -> Result<f64, CoherenceError> {
    let n = corpus.len();
    for index in [u, v] {
        if index >= n {
            return Err(CoherenceError::IndexOutOfRange { index, len: n });
        }
    }
    let (u, v) = (u.min(v), u.max(v));
    let (emb, memb) = (corpus.embeddings(), corpus.memberships());
    let s = angular_similarity(emb.row(u), emb.row(v))?;
    let t = topic_similarity(memb.row(u), memb.row(v))?;
    Ok((s * t).sqrt())
}

/// Stored upper triangle of a symmetric coherence matrix.
///
/// The diagonal is not stored; `theta(u, u)` is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl CoherenceMatrix {
    /// Fills the matrix from `f(u, v)` evaluated for every `u < v`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|u| (u + 1..n).map(|v| f(u, v)).collect())
            .collect();
        Self {
            n,
            upper: rows.concat(),
        }
    }

    fn offset(&self, u: usize, v: usize) -> usize {
        debug_assert!(u < v && v < self.n);
        u * (2 * self.n - u - 1) / 2 + (v - u - 1)
    }
}

impl Coherence for CoherenceMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn theta(&self, u: usize, v: usize) -> f64 {
        match u.cmp(&v) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => self.upper[self.offset(u, v)],
            std::cmp::Ordering::Greater => self.upper[self.offset(v, u)],
        }
    }

    fn is_materialized(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderMode {
    /// Store all pairs up front, unless the corpus exceeds the limit.
    Materialized,
    /// Compute each pair on demand.
    Lazy,
}

/// Base coherence over a validated corpus, either materialized or lazy.
///
/// Both modes run the same arithmetic, so they agree bit for bit.
#[derive(Debug, Clone)]
pub struct CoherenceProvider<'a> {
    corpus: &'a Corpus,
    sq_norms: Vec<f64>,
    matrix: Option<CoherenceMatrix>,
}

impl<'a> CoherenceProvider<'a> {
    pub fn new(corpus: &'a Corpus, mode: ProviderMode) -> Self {
        Self::with_limit(corpus, mode, DEFAULT_MATERIALIZE_LIMIT)
    }

    pub fn with_limit(corpus: &'a Corpus, mode: ProviderMode, limit: usize) -> Self {
        let sq_norms = corpus.embeddings().iter_rows().map(|r| dot(r, r)).collect();
        let mut provider = Self {
            corpus,
            sq_norms,
            matrix: None,
        };
        if mode == ProviderMode::Materialized && corpus.len() <= limit {
            let matrix = CoherenceMatrix::from_fn(corpus.len(), |u, v| provider.compute(u, v));
            provider.matrix = Some(matrix);
        }
        provider
    }

    pub fn corpus(&self) -> &'a Corpus {
        self.corpus
    }

    pub fn mode(&self) -> ProviderMode {
        if self.matrix.is_some() {
            ProviderMode::Materialized
        } else {
            ProviderMode::Lazy
        }
    }

    fn compute(&self, u: usize, v: usize) -> f64 {
        let (u, v) = (u.min(v), u.max(v));
        let (emb, memb) = (self.corpus.embeddings(), self.corpus.memberships());
        let s = angular_from_parts(
            dot(emb.row(u), emb.row(v)),
            self.sq_norms[u],
            self.sq_norms[v],
        );
        let t = 1.0 - jsd_base2(memb.row(u), memb.row(v));
        (s * t).sqrt()
    }
}

impl Coherence for CoherenceProvider<'_> {
    fn len(&self) -> usize {
        self.corpus.len()
    }

    fn theta(&self, u: usize, v: usize) -> f64 {
        match &self.matrix {
            Some(m) if u != v => m.theta(u, v),
            _ => self.compute(u, v),
        }
    }

    fn is_materialized(&self) -> bool {
        self.matrix.is_some()
    }
}
