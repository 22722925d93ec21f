use std::collections::VecDeque;

use super::{CentralityMode, SparseCoherenceGraph};

/// Closeness centrality on outgoing hop distances, Wasserman–Faust style:
/// `(r / (n - 1)) * (r / sum_of_distances)` over the `r` nodes reachable from
/// each node. Nodes that reach nothing score 0.
pub fn closeness_centrality(graph: &SparseCoherenceGraph) -> Vec<f64> {
    let n = graph.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    (0..n)
        .map(|s| {
            dist.fill(usize::MAX);
            dist[s] = 0;
            queue.clear();
            queue.push_back(s);
            let (mut reached, mut total) = (0usize, 0usize);
            while let Some(x) = queue.pop_front() {
                for e in graph.out_edges(x) {
                    if dist[e.target] == usize::MAX {
                        dist[e.target] = dist[x] + 1;
                        reached += 1;
                        total += dist[e.target];
                        queue.push_back(e.target);
                    }
                }
            }
            if reached == 0 {
                0.0
            } else {
                let r = reached as f64;
                (r / (n - 1) as f64) * (r / total as f64)
            }
        })
        .collect()
}

/// Returns a copy whose edge weights are multiplied by the closeness
/// centrality of the source or target node. Edges scaled to zero are
/// dropped. Applying this twice scales twice.
pub fn centrality_weights(
    graph: &SparseCoherenceGraph,
    mode: CentralityMode,
) -> SparseCoherenceGraph {
    let mut flags = graph.flags();
    if mode == CentralityMode::Off {
        return graph.clone();
    }
    flags.centrality = mode;
    let scores = closeness_centrality(graph);
    graph.map_weights(
        |u, v, w| match mode {
            CentralityMode::Source => w * scores[u],
            CentralityMode::Target => w * scores[v],
            CentralityMode::Off => w,
        },
        flags,
    )
}
