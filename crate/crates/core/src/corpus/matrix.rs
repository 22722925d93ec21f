//! Dense row-major matrices and their on-disk formats.
//!
//! The binary format is `NTM1` followed by little-endian `u32` rows, `u32`
//! cols, and `rows * cols` `f32` values. Files ending in `.csv` are read as
//! plain numeric rows with no header.

use std::fs;
use std::path::Path;

use super::CorpusError;

const MAGIC: &[u8; 4] = b"NTM1";
const HEADER_LEN: usize = 12;

/// Row-major matrix of `f64`, promoted from `f32` storage on load.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, CorpusError> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(CorpusError::Shape {
                rows,
                cols,
                values: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows. An empty input yields a 0×0 matrix.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, CorpusError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(CorpusError::Shape {
                    rows: rows.len(),
                    cols,
                    values: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    /// Returns a copy with one extra trailing column filled by `fill(row)`.
    pub(crate) fn with_appended_column(&self, fill: impl Fn(&[f64]) -> f64) -> Self {
        let cols = self.cols + 1;
        let mut data = Vec::with_capacity(self.rows * cols);
        for row in self.iter_rows() {
            data.extend_from_slice(row);
            data.push(fill(row));
        }
        Self {
            rows: self.rows,
            cols,
            data,
        }
    }
}

/// Encodes a matrix in the binary `NTM1` format. Values are narrowed to `f32`.
pub fn encode_ntm1(matrix: &Matrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + matrix.data.len() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(matrix.rows as u32).to_le_bytes());
    out.extend_from_slice(&(matrix.cols as u32).to_le_bytes());
    for &v in &matrix.data {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    out
}

pub fn decode_ntm1(bytes: &[u8]) -> Result<Matrix, String> {
    if bytes.len() < HEADER_LEN {
        return Err(format!("file too short ({} bytes)", bytes.len()));
    }
    if &bytes[..4] != MAGIC {
        return Err("bad magic bytes, expected NTM1".into());
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let expected = rows
        .checked_mul(cols)
        .and_then(|c| c.checked_mul(4))
        .ok_or("header dimensions overflow")?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(format!(
            "payload is {} bytes, header {rows}x{cols} needs {expected}",
            payload.len()
        ));
    }
    let data = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()) as f64)
        .collect();
    Ok(Matrix { rows, cols, data })
}

fn decode_csv(bytes: &[u8]) -> Result<Matrix, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f32>()
                    .map(f64::from)
                    .map_err(|_| format!("line {}: not a number: {field:?}", line + 1))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Matrix::from_rows(&rows).map_err(|e| e.to_string())
}

/// Reads a matrix file, choosing the CSV reader for `.csv` paths.
pub fn read_matrix(path: &Path) -> Result<Matrix, CorpusError> {
    let bytes = fs::read(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let decoded = if is_csv {
        decode_csv(&bytes)
    } else {
        decode_ntm1(&bytes)
    };
    decoded.map_err(|message| CorpusError::MatrixFormat {
        path: path.to_path_buf(),
        message,
    })
}

pub fn write_matrix(path: &Path, matrix: &Matrix) -> Result<(), CorpusError> {
    fs::write(path, encode_ntm1(matrix)).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}
