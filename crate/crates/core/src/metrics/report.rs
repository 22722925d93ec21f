//! Evaluation tables.
//!
//! CSV columns, in order: `method, pair, storyline, length, min_coherence,
//! reliability, dtw_similarity, ndtw_distance, ids`. DTW cells are empty when
//! no reference was given; `ids` joins document ids with spaces.

use serde::{Deserialize, Serialize};

use super::DtwSpace;

pub const CSV_COLUMNS: [&str; 9] = [
    "method",
    "pair",
    "storyline",
    "length",
    "min_coherence",
    "reliability",
    "dtw_similarity",
    "ndtw_distance",
    "ids",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRow {
    pub method: String,
    /// Index of the source/target pair the row belongs to.
    pub pair: usize,
    /// Rank of the storyline within its method.
    pub storyline: usize,
    pub length: usize,
    pub min_coherence: f64,
    pub reliability: f64,
    pub dtw_similarity: Option<f64>,
    pub ndtw_distance: Option<f64>,
    pub ids: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    /// Space the DTW columns were computed in, if any.
    pub dtw_space: Option<DtwSpace>,
    pub rows: Vec<EvaluationRow>,
}

impl EvaluationReport {
    /// CSV rendering with a header row. `preamble` lines are written first,
    /// each prefixed with `# `.
    pub fn to_csv(&self, preamble: &[String]) -> String {
        let mut out = String::new();
        for line in preamble {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(CSV_COLUMNS).unwrap();
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for row in &self.rows {
            writer
                .write_record([
                    row.method.clone(),
                    row.pair.to_string(),
                    row.storyline.to_string(),
                    row.length.to_string(),
                    row.min_coherence.to_string(),
                    row.reliability.to_string(),
                    opt(row.dtw_similarity),
                    opt(row.ndtw_distance),
                    row.ids.join(" "),
                ])
                .unwrap();
        }
        out.push_str(&String::from_utf8(writer.into_inner().unwrap()).unwrap());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let report = EvaluationReport {
            dtw_space: Some(DtwSpace::Lo),
            rows: vec![EvaluationRow {
                method: "trail".into(),
                pair: 0,
                storyline: 1,
                length: 3,
                min_coherence: 0.5,
                reliability: 0.75,
                dtw_similarity: None,
                ndtw_distance: Some(0.25),
                ids: vec!["a".into(), "b".into(), "c".into()],
            }],
        };
        let csv = report.to_csv(&["seed=0".into()]);
        assert_eq!(
            csv,
            "# seed=0\n\
             method,pair,storyline,length,min_coherence,reliability,dtw_similarity,ndtw_distance,ids\n\
             trail,0,1,3,0.5,0.75,,0.25,a b c\n"
        );
    }
}
