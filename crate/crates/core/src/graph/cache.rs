//! Text cache for sparse graphs.
//!
//! ```text
//! ntgraph 1 <n> <tau> <omega> <flags>
//! u<TAB>v<TAB>w
//! ```
//!
//! Reals are written with 17 significant digits so they parse back to the
//! same `f64`. `<flags>` is `time=0|1,mask=0|1,centrality=off|source|target`.

use std::fmt::Write as _;

use super::{CentralityMode, ConstraintFlags, GraphError, SparseCoherenceGraph};

pub const GRAPH_CACHE_VERSION: u32 = 1;

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn flags_token(flags: ConstraintFlags) -> String {
    format!(
        "time={},mask={},centrality={}",
        u8::from(flags.time_directed),
        u8::from(flags.masked),
        flags.centrality
    )
}

fn parse_flags(token: &str) -> Result<ConstraintFlags, String> {
    let mut flags = ConstraintFlags::default();
    let mut seen = 0;
    for part in token.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("malformed flag {part:?}"))?;
        let bit = || match value {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(format!("flag {key} expects 0 or 1, got {value:?}")),
        };
        match key {
            "time" => flags.time_directed = bit()?,
            "mask" => flags.masked = bit()?,
            "centrality" => flags.centrality = value.parse::<CentralityMode>()?,
            _ => return Err(format!("unknown flag {key:?}")),
        }
        seen += 1;
    }
    if seen != 3 {
        return Err(format!("expected 3 flags, found {seen}"));
    }
    Ok(flags)
}

/// Serializes the graph. Output depends only on the graph contents.
pub fn write_cache(graph: &SparseCoherenceGraph) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "ntgraph {GRAPH_CACHE_VERSION} {} {} {} {}",
        graph.node_count(),
        real(graph.tau()),
        real(graph.omega()),
        flags_token(graph.flags())
    )
    .unwrap();
    for (u, v, w) in graph.edges() {
        writeln!(out, "{u}\t{v}\t{}", real(w)).unwrap();
    }
    out
}

pub fn read_cache(text: &str) -> Result<SparseCoherenceGraph, GraphError> {
    let bad = |line: usize, message: String| GraphError::CacheFormat { line, message };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 6 || fields[0] != "ntgraph" {
        return Err(bad(1, format!("bad header {header:?}")));
    }
    if fields[1] != GRAPH_CACHE_VERSION.to_string() {
        return Err(bad(1, format!("unsupported version {}", fields[1])));
    }
    let n: usize = fields[2]
        .parse()
        .map_err(|_| bad(1, format!("bad node count {:?}", fields[2])))?;
    let tau: f64 = fields[3]
        .parse()
        .map_err(|_| bad(1, format!("bad tau {:?}", fields[3])))?;
    let omega: f64 = fields[4]
        .parse()
        .map_err(|_| bad(1, format!("bad omega {:?}", fields[4])))?;
    let flags = parse_flags(fields[5]).map_err(|m| bad(1, m))?;

    let mut edges = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let (Some(u), Some(v), Some(w), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad(line_no, "expected u<TAB>v<TAB>w".into()));
        };
        let u: usize = u
            .parse()
            .map_err(|_| bad(line_no, format!("bad node {u:?}")))?;
        let v: usize = v
            .parse()
            .map_err(|_| bad(line_no, format!("bad node {v:?}")))?;
        let w: f64 = w
            .parse()
            .map_err(|_| bad(line_no, format!("bad weight {w:?}")))?;
        edges.push((u, v, w));
    }
    SparseCoherenceGraph::from_edges(n, edges, tau, omega, flags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_and_edge_lines() {
        let flags = ConstraintFlags {
            time_directed: true,
            masked: false,
            centrality: CentralityMode::Source,
        };
        let g = SparseCoherenceGraph::from_edges(3, [(2, 0, 0.1), (0, 1, 0.75)], 1.0, 0.1, flags)
            .unwrap();
        let text = write_cache(&g);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "ntgraph 1 3 1.0000000000000000e0 1.0000000000000001e-1 time=1,mask=0,centrality=source"
        );
        assert_eq!(lines.next().unwrap(), "0\t1\t7.5000000000000000e-1");
        assert_eq!(lines.next().unwrap(), "2\t0\t1.0000000000000001e-1");
        assert_eq!(read_cache(&text).unwrap(), g);
    }

    #[test]
    fn malformed_caches() {
        assert!(read_cache("").is_err());
        assert!(read_cache("ntgraph 2 2 1 1 time=0,mask=0,centrality=off\n").is_err());
        assert!(read_cache("ntgraph 1 2 1 1 time=0,mask=0\n").is_err());
        let err = read_cache("ntgraph 1 2 1 1 time=0,mask=0,centrality=off\n0\t1\n").unwrap_err();
        assert!(matches!(err, GraphError::CacheFormat { line: 2, .. }));
        assert!(matches!(
            read_cache("ntgraph 1 2 1 1 time=0,mask=0,centrality=off\n0\t5\t0.5\n"),
            Err(GraphError::NodeOutOfRange { node: 5, n: 2 })
        ));
    }

    proptest! {
        #[test]
        fn weights_round_trip_exactly(
            weights in proptest::collection::vec(1e-300f64..1e3, 1..20),
            tau in 0.0f64..4.0,
        ) {
            let n = weights.len() + 1;
            let edges: Vec<_> = weights.iter().enumerate().map(|(i, &w)| (i, i + 1, w)).collect();
            let g = SparseCoherenceGraph::from_edges(n, edges, tau, weights[0], Default::default()).unwrap();
            let back = read_cache(&write_cache(&g)).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(write_cache(&back), write_cache(&g));
        }
    }
}
