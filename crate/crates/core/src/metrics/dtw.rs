use serde::Serialize;

use super::MetricsError;

/// Warping path between two point sequences.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DtwAlignment {
    /// Matched `(i, j)` index pairs from `(0, 0)` to `(len_a - 1, len_b - 1)`.
    pub pairs: Vec<(usize, usize)>,
    /// Euclidean distance of each matched pair.
    pub distances: Vec<f64>,
    pub total_cost: f64,
}

impl DtwAlignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_points<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> Result<usize, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::EmptySequence);
    }
    let dim = a[0].as_ref().len();
    for p in a.iter().chain(b) {
        if p.as_ref().len() != dim {
            return Err(MetricsError::DimensionMismatch {
                expected: dim,
                found: p.as_ref().len(),
            });
        }
    }
    Ok(dim)
}

/// Classic full-matrix dynamic time warping with Euclidean point distance.
///
/// Backtracking prefers the diagonal predecessor on ties, then `(i - 1, j)`.
pub fn dtw_align<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> Result<DtwAlignment, MetricsError> {
    check_points(a, b)?;
    let (rows, cols) = (a.len(), b.len());
    let dist = |i: usize, j: usize| euclidean(a[i].as_ref(), b[j].as_ref());
    let mut acc = vec![f64::INFINITY; rows * cols];
    let at = |i: usize, j: usize| i * cols + j;
    for i in 0..rows {
        for j in 0..cols {
            let prev = if i == 0 && j == 0 {
                0.0
            } else {
                let diag = if i > 0 && j > 0 {
                    acc[at(i - 1, j - 1)]
                } else {
                    f64::INFINITY
                };
                let up = if i > 0 {
                    acc[at(i - 1, j)]
                } else {
                    f64::INFINITY
                };
                let left = if j > 0 {
                    acc[at(i, j - 1)]
                } else {
                    f64::INFINITY
                };
                diag.min(up).min(left)
            };
            acc[at(i, j)] = dist(i, j) + prev;
        }
    }

    let (mut i, mut j) = (rows - 1, cols - 1);
    let mut pairs = vec![(i, j)];
    while (i, j) != (0, 0) {
        (i, j) = if i == 0 {
            (0, j - 1)
        } else if j == 0 {
            (i - 1, 0)
        } else {
            let diag = acc[at(i - 1, j - 1)];
            let up = acc[at(i - 1, j)];
            let left = acc[at(i, j - 1)];
            if diag <= up && diag <= left {
                (i - 1, j - 1)
            } else if up <= left {
                (i - 1, j)
            } else {
                (i, j - 1)
            }
        };
        pairs.push((i, j));
    }
    pairs.reverse();
    let distances = pairs.iter().map(|&(i, j)| dist(i, j)).collect();
    Ok(DtwAlignment {
        pairs,
        distances,
        total_cost: acc[at(rows - 1, cols - 1)],
    })
}

/// Accumulated cost divided by the number of matches.
pub fn ndtw_distance(alignment: &DtwAlignment) -> f64 {
    alignment.total_cost / alignment.pairs.len() as f64
}

/// Mean cosine similarity of the matched points.
pub fn dtw_similarity<P: AsRef<[f64]>>(
    a: &[P],
    b: &[P],
    alignment: &DtwAlignment,
) -> Result<f64, MetricsError> {
    let mut total = 0.0;
    for &(i, j) in &alignment.pairs {
        let (x, y) = (a[i].as_ref(), b[j].as_ref());
        let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(u, v)| u * v).sum::<f64>();
        let (xx, yy) = (dot(x, x), dot(y, y));
        if xx == 0.0 || yy == 0.0 {
            return Err(MetricsError::ZeroVector);
        }
        total += (dot(x, y) / (xx * yy).sqrt()).clamp(-1.0, 1.0);
    }
    Ok(total / alignment.pairs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> Vec<[f64; 1]> {
        values.iter().map(|&v| [v]).collect()
    }

    #[test]
    fn identical_sequences_align_diagonally() {
        let a = vec![[1.0, 2.0], [0.5, -1.0], [3.0, 0.0]];
        let al = dtw_align(&a, &a).unwrap();
        assert_eq!(al.total_cost, 0.0);
        assert_eq!(al.pairs, vec![(0, 0), (1, 1), (2, 2)]);
        assert_eq!(ndtw_distance(&al), 0.0);
        assert_eq!(dtw_similarity(&a, &a, &al).unwrap(), 1.0);
    }

    #[test]
    fn hand_computed_example() {
        let (a, b) = (line(&[0.0, 2.0]), line(&[0.0, 1.0, 2.0]));
        let al = dtw_align(&a, &b).unwrap();
        assert_eq!(al.total_cost, 1.0);
        assert_eq!(al.len(), 3);
        // (1,2) ties between diagonal (0,1) and left (1,1); diagonal wins
        assert_eq!(al.pairs, vec![(0, 0), (0, 1), (1, 2)]);
        assert!((ndtw_distance(&al) - 1.0 / 3.0).abs() < 1e-15);
        let swapped = dtw_align(&b, &a).unwrap();
        assert_eq!(ndtw_distance(&swapped), ndtw_distance(&al));
    }

    #[test]
    fn single_points() {
        let al = dtw_align(&[[0.0, 0.0]], &[[3.0, 4.0]]).unwrap();
        assert_eq!(al.pairs, vec![(0, 0)]);
        assert_eq!(al.total_cost, 5.0);
    }

    #[test]
    fn cosine_along_path() {
        let (x, y, z) = ([[1.0, 0.0]], [[0.0, 1.0]], [[-1.0, 0.0]]);
        let al = dtw_align(&x, &y).unwrap();
        assert_eq!(dtw_similarity(&x, &y, &al).unwrap(), 0.0);
        let al = dtw_align(&x, &z).unwrap();
        assert_eq!(dtw_similarity(&x, &z, &al).unwrap(), -1.0);
        let origin = [[0.0, 0.0]];
        let al = dtw_align(&x, &origin).unwrap();
        assert!(matches!(
            dtw_similarity(&x, &origin, &al),
            Err(MetricsError::ZeroVector)
        ));
    }

    #[test]
    fn input_errors() {
        let empty: Vec<[f64; 1]> = Vec::new();
        assert!(matches!(
            dtw_align(&empty, &line(&[1.0])),
            Err(MetricsError::EmptySequence)
        ));
        let a = vec![vec![1.0], vec![1.0, 2.0]];
        assert!(matches!(
            dtw_align(&a, &a),
            Err(MetricsError::DimensionMismatch {
                expected: 1,
                found: 2
            })
        ));
    }
}
