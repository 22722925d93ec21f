//! Documents, their embedding-derived matrices, and corpus ingest.

mod document;
mod matrix;

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use document::{parse_date, read_documents, write_documents, Document};
pub use matrix::{decode_ntm1, encode_ntm1, read_matrix, write_matrix, Matrix};

/// Allowed deviation of a membership row sum from 1.
pub const SIMPLEX_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    MatrixFormat { path: PathBuf, message: String },
    #[error("documents line {line}: {message}")]
    DocumentFormat { line: usize, message: String },
    #[error("document {id:?}: unparseable date {value:?}")]
    InvalidDate { id: String, value: String },
    #[error("document on row {row} has an empty id")]
    EmptyId { row: usize },
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("{values} values do not fill a {rows}x{cols} matrix")]
    Shape {
        rows: usize,
        cols: usize,
        values: usize,
    },
    #[error("{matrix} matrix has {found} rows, expected {expected}")]
    RowCountMismatch {
        matrix: MatrixKind,
        expected: usize,
        found: usize,
    },
    #[error("{matrix} matrix has a non-finite value at ({row}, {col})")]
    NonFinite {
        matrix: MatrixKind,
        row: usize,
        col: usize,
    },
    #[error("membership row {row} has negative entry {value} in column {col}")]
    NegativeMembership { row: usize, col: usize, value: f64 },
    #[error("membership row {row} sums to {sum}, above 1")]
    MembershipOverflow { row: usize, sum: f64 },
    #[error("embedding row {row} is the zero vector")]
    ZeroEmbedding { row: usize },
    #[error("projection dimension {projection} must be below embedding dimension {embedding}")]
    ProjectionDims { projection: usize, embedding: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Embeddings,
    Projections,
    Memberships,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::Embeddings => "embedding",
            MatrixKind::Projections => "projection",
            MatrixKind::Memberships => "membership",
        })
    }
}

/// Documents plus high-dimensional embeddings, low-dimensional projections
/// and soft cluster memberships, row-aligned with the documents.
///
/// Built through [`Corpus::new`] or [`load_corpus`], a corpus always
/// satisfies every check in [`validate_alignment`].
#[derive(Debug, Clone)]
pub struct Corpus {
    documents: Vec<Document>,
    embeddings: Matrix,
    projections: Matrix,
    memberships: Matrix,
}

impl Corpus {
    /// Validates the parts and appends an outlier membership column when some
    /// row carries less than unit mass.
    pub fn new(
        documents: Vec<Document>,
        embeddings: Matrix,
        projections: Matrix,
        memberships: Matrix,
    ) -> Result<Self, CorpusError> {
        let memberships = with_outlier_component(memberships);
        let corpus = Self::from_raw_parts(documents, embeddings, projections, memberships);
        match validate_alignment(&corpus).into_first_error() {
            Some(err) => Err(err),
            None => Ok(corpus),
        }
    }

    /// Assembles a corpus without normalization or validation.
    ///
    /// Downstream modules assume the invariants hold; use this only to feed
    /// [`validate_alignment`] or in tests.
    pub fn from_raw_parts(
        documents: Vec<Document>,
        embeddings: Matrix,
        projections: Matrix,
        memberships: Matrix,
    ) -> Self {
        Self {
            documents,
            embeddings,
            projections,
            memberships,
        }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, i: usize) -> &Document {
        &self.documents[i]
    }

    pub fn embeddings(&self) -> &Matrix {
        &self.embeddings
    }

    pub fn projections(&self) -> &Matrix {
        &self.projections
    }

    pub fn memberships(&self) -> &Matrix {
        &self.memberships
    }

    /// Index of the document with the given id.
    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.documents.iter().position(|d| d.id == id)
    }
}

/// Widens the matrix by one outlier column if any row sums to less than
/// `1 - SIMPLEX_TOLERANCE`. The new column holds each row's missing mass.
fn with_outlier_component(memberships: Matrix) -> Matrix {
    let deficient = |row: &[f64]| -> bool { row.iter().sum::<f64>() < 1.0 - SIMPLEX_TOLERANCE };
    if !memberships.iter_rows().any(deficient) {
        return memberships;
    }
    memberships.with_appended_column(|row| {
        if deficient(row) {
            1.0 - row.iter().sum::<f64>()
        } else {
            0.0
        }
    })
}

/// Reads the four corpus files and returns a validated corpus.
pub fn load_corpus(
    docs_path: &Path,
    emb_path: &Path,
    proj_path: &Path,
    memb_path: &Path,
) -> Result<Corpus, CorpusError> {
    let documents = read_documents(docs_path)?;
    let embeddings = read_matrix(emb_path)?;
    let projections = read_matrix(proj_path)?;
    let memberships = read_matrix(memb_path)?;
    Corpus::new(documents, embeddings, projections, memberships)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    UniqueIds,
    RowCounts,
    FiniteValues,
    MembershipSimplex,
    NonZeroEmbeddings,
    ProjectionDims,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::UniqueIds,
        Check::RowCounts,
        Check::FiniteValues,
        Check::MembershipSimplex,
        Check::NonZeroEmbeddings,
        Check::ProjectionDims,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::UniqueIds => "unique-ids",
            Check::RowCounts => "row-counts",
            Check::FiniteValues => "finite-values",
            Check::MembershipSimplex => "membership-simplex",
            Check::NonZeroEmbeddings => "nonzero-embeddings",
            Check::ProjectionDims => "projection-dims",
        }
    }
}

#[derive(Debug)]
pub struct CheckOutcome {
    pub check: Check,
    pub failures: Vec<CorpusError>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug)]
pub struct AlignmentReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl AlignmentReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn outcome(&self, check: Check) -> &CheckOutcome {
        self.outcomes
            .iter()
            .find(|o| o.check == check)
            .expect("report covers every check")
    }

    pub fn passed(&self, check: Check) -> bool {
        self.outcome(check).passed()
    }

    fn into_first_error(self) -> Option<CorpusError> {
        self.outcomes.into_iter().flat_map(|o| o.failures).next()
    }
}

/// Re-checks every corpus invariant without mutating anything.
pub fn validate_alignment(corpus: &Corpus) -> AlignmentReport {
    let outcomes = Check::ALL
        .iter()
        .map(|&check| CheckOutcome {
            check,
            failures: run_check(corpus, check),
        })
        .collect();
    AlignmentReport { outcomes }
}

fn matrices(corpus: &Corpus) -> [(MatrixKind, &Matrix); 3] {
    [
        (MatrixKind::Embeddings, &corpus.embeddings),
        (MatrixKind::Projections, &corpus.projections),
        (MatrixKind::Memberships, &corpus.memberships),
    ]
}

fn run_check(corpus: &Corpus, check: Check) -> Vec<CorpusError> {
    let mut failures = Vec::new();
    match check {
        Check::UniqueIds => {
            let mut seen = HashSet::new();
            for (row, doc) in corpus.documents.iter().enumerate() {
                if doc.id.is_empty() {
                    failures.push(CorpusError::EmptyId { row });
                } else if !seen.insert(doc.id.as_str()) {
                    failures.push(CorpusError::DuplicateId(doc.id.clone()));
                }
            }
        }
        Check::RowCounts => {
            let expected = corpus.documents.len();
            for (matrix, m) in matrices(corpus) {
                if m.rows() != expected {
                    failures.push(CorpusError::RowCountMismatch {
                        matrix,
                        expected,
                        found: m.rows(),
                    });
                }
            }
        }
        Check::FiniteValues => {
            for (matrix, m) in matrices(corpus) {
                let bad = m.as_slice().iter().position(|v| !v.is_finite());
                if let Some(pos) = bad {
                    failures.push(CorpusError::NonFinite {
                        matrix,
                        row: pos / m.cols(),
                        col: pos % m.cols(),
                    });
                }
            }
        }
        Check::MembershipSimplex => {
            for (row, values) in corpus.memberships.iter_rows().enumerate() {
                if let Some((col, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0.0) {
                    failures.push(CorpusError::NegativeMembership { row, col, value });
                    continue;
                }
                let sum: f64 = values.iter().sum();
                if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
                    failures.push(CorpusError::MembershipOverflow { row, sum });
                }
            }
        }
        Check::NonZeroEmbeddings => {
            for (row, values) in corpus.embeddings.iter_rows().enumerate() {
                if values.iter().all(|v| *v == 0.0) {
                    failures.push(CorpusError::ZeroEmbedding { row });
                }
            }
        }
        Check::ProjectionDims => {
            let (projection, embedding) = (corpus.projections.cols(), corpus.embeddings.cols());
            if projection >= embedding {
                failures.push(CorpusError::ProjectionDims {
                    projection,
                    embedding,
                });
            }
        }
    }
    failures
}
