//! Maximum-capacity storylines over a sparse coherence graph.
//!
//! [`widest_path`] runs Dijkstra with a maximin objective: a node's tentative
//! capacity is the minimum of its predecessor's capacity and the connecting
//! edge weight, and the node with the largest capacity is settled first.
//! Among paths of equal capacity the one with fewer hops wins, then the
//! lexicographically smallest node sequence.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::graph::SparseCoherenceGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("source and target are the same node {0}")]
    SameEndpoints(usize),
    #[error("no path from {from} to {to}")]
    NoPath { from: usize, to: usize },
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("endpoint {0} is in the excluded set")]
    ExcludedEndpoint(usize),
    #[error("storyline needs at least 2 nodes, got {0}")]
    TooShort(usize),
    #[error("storyline visits node {0} twice")]
    RepeatedNode(usize),
    #[error("storyline step ({u}, {v}) is not an edge of the graph")]
    MissingEdge { u: usize, v: usize },
    #[error("k must be at least 1")]
    ZeroK,
}

/// Minimum weight and geometric mean of a sequence of edge weights.
///
/// The mean is clamped to at least the minimum, and equals it exactly when
/// all weights are equal.
pub(crate) fn bottleneck_and_reliability(weights: &[f64]) -> (f64, f64) {
    let bottleneck = weights.iter().copied().fold(f64::INFINITY, f64::min);
    if weights.iter().all(|&w| w == bottleneck) {
        return (bottleneck, bottleneck);
    }
    let mean_log = weights.iter().map(|w| w.ln()).sum::<f64>() / weights.len() as f64;
    (bottleneck, mean_log.exp().max(bottleneck))
}

/// A simple path of documents with the weights of its steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Storyline {
    nodes: Vec<usize>,
    weights: Vec<f64>,
    bottleneck: f64,
    reliability: f64,
}

impl Storyline {
    /// Checks that `nodes` is a simple path in `graph` and reads its weights.
    pub fn from_nodes(graph: &SparseCoherenceGraph, nodes: Vec<usize>) -> Result<Self, PathError> {
        if nodes.len() < 2 {
            return Err(PathError::TooShort(nodes.len()));
        }
        let n = graph.node_count();
        let mut seen = vec![false; n];
        for &node in &nodes {
            if node >= n {
                return Err(PathError::NodeOutOfRange { node, n });
            }
            if std::mem::replace(&mut seen[node], true) {
                return Err(PathError::RepeatedNode(node));
            }
        }
        let weights = nodes
            .windows(2)
            .map(|w| {
                graph
                    .weight(w[0], w[1])
                    .ok_or(PathError::MissingEdge { u: w[0], v: w[1] })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_parts(nodes, weights))
    }

    fn from_parts(nodes: Vec<usize>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(nodes.len(), weights.len() + 1);
        let (bottleneck, reliability) = bottleneck_and_reliability(&weights);
        Self {
            nodes,
            weights,
            bottleneck,
            reliability,
        }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// `weights()[i]` belongs to the step `nodes()[i] -> nodes()[i + 1]`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bottleneck(&self) -> f64 {
        self.bottleneck
    }

    pub fn reliability(&self) -> f64 {
        self.reliability
    }

    pub fn source(&self) -> usize {
        self.nodes[0]
    }

    pub fn target(&self) -> usize {
        self.nodes[self.nodes.len() - 1]
    }

    /// Nodes strictly between the endpoints.
    pub fn interior(&self) -> &[usize] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Up to `k` storylines between one source and target with pairwise
/// disjoint interiors.
#[derive(Debug, Clone, PartialEq)]
pub struct NarrativeTrail {
    pub source: usize,
    pub target: usize,
    pub requested: usize,
    pub storylines: Vec<Storyline>,
    /// Set when fewer than `requested` storylines exist.
    pub exhausted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Capacity(f64);

impl Eq for Capacity {}

impl PartialOrd for Capacity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Capacity {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Nodes and the one edge a search is not allowed to use.
struct Restriction<'a> {
    excluded: &'a [bool],
    /// Skip the direct `source -> target` edge.
    skip_direct: bool,
}

impl Restriction<'_> {
    fn admits(&self, s: usize, t: usize, u: usize, v: usize) -> bool {
        !self.excluded[v] && !(self.skip_direct && u == s && v == t)
    }
}

fn check_endpoints(graph: &SparseCoherenceGraph, s: usize, t: usize) -> Result<(), PathError> {
    let n = graph.node_count();
    for node in [s, t] {
        if node >= n {
            return Err(PathError::NodeOutOfRange { node, n });
        }
    }
    if s == t {
        return Err(PathError::SameEndpoints(s));
    }
    Ok(())
}

/// Largest achievable bottleneck from `s` to `t`, or `None` if unreachable.
fn max_capacity(
    graph: &SparseCoherenceGraph,
    s: usize,
    t: usize,
    restriction: &Restriction<'_>,
) -> Option<f64> {
    let n = graph.node_count();
    // +inf at the source lets the first edge set the bottleneck, whatever
    // scale the weights are on.
    let mut capacity = vec![f64::NEG_INFINITY; n];
    let mut settled = vec![false; n];
    capacity[s] = f64::INFINITY;
    let mut heap = BinaryHeap::from([(Capacity(f64::INFINITY), Reverse(s))]);
    while let Some((Capacity(c), Reverse(u))) = heap.pop() {
        if settled[u] || c < capacity[u] {
            continue;
        }
        settled[u] = true;
        if u == t {
            return Some(c);
        }
        for e in graph.out_edges(u) {
            let v = e.target;
            if !restriction.admits(s, t, u, v) {
                continue;
            }
            let candidate = c.min(e.weight);
            if settled[v] {
                debug_assert!(
                    candidate <= capacity[v],
                    "settled node {v} would improve from {} to {candidate}",
                    capacity[v]
                );
                continue;
            }
            if candidate > capacity[v] {
                capacity[v] = candidate;
                heap.push((Capacity(candidate), Reverse(v)));
            }
        }
    }
    None
}

/// Fewest-hop `s -> t` path using only edges of weight at least
/// `min_weight`, choosing the lexicographically smallest such sequence.
fn min_hop_path(
    graph: &SparseCoherenceGraph,
    s: usize,
    t: usize,
    min_weight: f64,
    restriction: &Restriction<'_>,
) -> Option<Vec<usize>> {
    let n = graph.node_count();
    let usable = |u: usize, v: usize, w: f64| w >= min_weight && restriction.admits(s, t, u, v);

    // hop distance to t over usable edges, by BFS on reversed edges
    let mut to_target = vec![usize::MAX; n];
    to_target[t] = 0;
    let mut queue = VecDeque::from([t]);
    while let Some(x) = queue.pop_front() {
        if x == s {
            break;
        }
        for &p in graph.in_neighbors(x) {
            if to_target[p] != usize::MAX || (p != s && restriction.excluded[p]) {
                continue;
            }
            let w = graph.weight(p, x).expect("in-neighbor has an out-edge");
            if usable(p, x, w) {
                to_target[p] = to_target[x] + 1;
                queue.push_back(p);
            }
        }
    }
    if to_target[s] == usize::MAX {
        return None;
    }

    // out-edges are sorted by target, so the first step that stays on a
    // shortest route gives the lexicographically smallest path
    let mut path = vec![s];
    let mut u = s;
    while u != t {
        let next = graph
            .out_edges(u)
            .iter()
            .find(|e| {
                to_target[e.target] != usize::MAX
                    && to_target[e.target] + 1 == to_target[u]
                    && usable(u, e.target, e.weight)
            })
            .expect("a shortest route continues")
            .target;
        path.push(next);
        u = next;
    }
    Some(path)
}

fn restricted_widest_path(
    graph: &SparseCoherenceGraph,
    s: usize,
    t: usize,
    restriction: &Restriction<'_>,
) -> Result<Storyline, PathError> {
    let no_path = PathError::NoPath { from: s, to: t };
    let best = max_capacity(graph, s, t, restriction).ok_or(no_path.clone())?;
    let nodes = min_hop_path(graph, s, t, best, restriction).ok_or(no_path)?;
    let storyline = Storyline::from_nodes(graph, nodes).expect("search yields a graph path");
    debug_assert_eq!(storyline.bottleneck(), best);
    Ok(storyline)
}

fn exclusion_mask(
    graph: &SparseCoherenceGraph,
    s: usize,
    t: usize,
    excluded: &[usize],
) -> Result<Vec<bool>, PathError> {
    let n = graph.node_count();
    let mut mask = vec![false; n];
    for &x in excluded {
        if x >= n {
            return Err(PathError::NodeOutOfRange { node: x, n });
        }
        if x == s || x == t {
            return Err(PathError::ExcludedEndpoint(x));
        }
        mask[x] = true;
    }
    Ok(mask)
}

/// The `s -> t` path that maximizes its minimum edge weight while avoiding
/// `excluded` nodes.
pub fn widest_path(
    graph: &SparseCoherenceGraph,
    s: usize,
    t: usize,
    excluded: &[usize],
) -> Result<Storyline, PathError> {
    check_endpoints(graph, s, t)?;
    let mask = exclusion_mask(graph, s, t, excluded)?;
    let restriction = Restriction {
        excluded: &mask,
        skip_direct: false,
    };
    restricted_widest_path(graph, s, t, &restriction)
}

/// Fewest-hop `s -> t` path, ties broken by the lexicographically smallest
/// node sequence.
pub fn shortest_simple_path(
    graph: &SparseCoherenceGraph,
    s: usize,
    t: usize,
) -> Result<Vec<usize>, PathError> {
    check_endpoints(graph, s, t)?;
    let mask = vec![false; graph.node_count()];
    let restriction = Restriction {
        excluded: &mask,
        skip_direct: false,
    };
    min_hop_path(graph, s, t, f64::NEG_INFINITY, &restriction)
        .ok_or(PathError::NoPath { from: s, to: t })
}

/// Extracts up to `k` widest paths, hiding the interior nodes of every
/// storyline found from the searches that follow.
///
/// A storyline that is the direct edge `s -> t` has no interior, so that
/// edge is hidden instead. Running out of paths after the first storyline
/// sets [`NarrativeTrail::exhausted`].
pub fn extract_trail(
    graph: &SparseCoherenceGraph,
    s: usize,
    t: usize,
    k: usize,
) -> Result<NarrativeTrail, PathError> {
    if k == 0 {
        return Err(PathError::ZeroK);
    }
    check_endpoints(graph, s, t)?;
    let mut excluded = vec![false; graph.node_count()];
    let mut skip_direct = false;
    let mut storylines: Vec<Storyline> = Vec::with_capacity(k);
    let mut exhausted = false;
    while storylines.len() < k {
        let restriction = Restriction {
            excluded: &excluded,
            skip_direct,
        };
        match restricted_widest_path(graph, s, t, &restriction) {
            Ok(storyline) => {
                for &x in storyline.interior() {
                    excluded[x] = true;
                }
                skip_direct |= storyline.len() == 2;
                storylines.push(storyline);
            }
            Err(PathError::NoPath { .. }) if !storylines.is_empty() => {
                exhausted = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(NarrativeTrail {
        source: s,
        target: t,
        requested: k,
        storylines,
        exhausted,
    })
}

/// Removes redundant middle documents from a storyline.
///
/// Scans triplets `(A, B, C)` left to right. With `R` the geometric mean of
/// `w(A, B)` and `w(B, C)`, `B` is dropped when the edge `A -> C` exists and
/// `w(A, C) >= R - delta`; the scan then retries at the same position. A
/// shortcut is also never allowed below the input bottleneck minus `delta`,
/// which a chain of removals could otherwise reach. Endpoints always stay.
pub fn reduce_redundancy(
    storyline: &Storyline,
    graph: &SparseCoherenceGraph,
    delta: f64,
) -> Storyline {
    let floor = storyline.bottleneck() - delta;
    let mut nodes = storyline.nodes().to_vec();
    let mut weights = storyline.weights().to_vec();
    let mut i = 0;
    while i + 2 < nodes.len() {
        let r = (weights[i] * weights[i + 1]).sqrt();
        match graph.weight(nodes[i], nodes[i + 2]) {
            Some(w) if w >= r - delta && w >= floor => {
                nodes.remove(i + 1);
                weights.remove(i + 1);
                weights[i] = w;
            }
            _ => i += 1,
        }
    }
    Storyline::from_parts(nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ConstraintFlags;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> SparseCoherenceGraph {
        SparseCoherenceGraph::from_edges(
            n,
            edges.iter().copied(),
            1.0,
            0.0,
            ConstraintFlags::default(),
        )
        .unwrap()
    }

    // s=0, a=1, b=2, t=3
    fn two_routes(w_sa: f64, w_at: f64, w_sb: f64, w_bt: f64) -> SparseCoherenceGraph {
        graph(4, &[(0, 1, w_sa), (1, 3, w_at), (0, 2, w_sb), (2, 3, w_bt)])
    }

    #[test]
    fn picks_larger_bottleneck() {
        let g = two_routes(0.9, 0.5, 0.6, 0.6);
        let p = widest_path(&g, 0, 3, &[]).unwrap();
        assert_eq!(p.nodes(), &[0, 2, 3]);
        assert_eq!(p.bottleneck(), 0.6);
    }

    #[test]
    fn endpoint_errors() {
        let g = two_routes(0.9, 0.5, 0.6, 0.6);
        assert_eq!(widest_path(&g, 1, 1, &[]), Err(PathError::SameEndpoints(1)));
        assert_eq!(
            widest_path(&g, 3, 0, &[]),
            Err(PathError::NoPath { from: 3, to: 0 })
        );
        assert_eq!(
            widest_path(&g, 0, 3, &[1, 2]),
            Err(PathError::NoPath { from: 0, to: 3 })
        );
        assert_eq!(
            widest_path(&g, 0, 3, &[3]),
            Err(PathError::ExcludedEndpoint(3))
        );
    }

    #[test]
    fn ties_prefer_fewer_hops_then_smaller_nodes() {
        // 0->1->4 and 0->2->4 and 0->3->5->4, all at capacity 0.5
        let g = graph(
            6,
            &[
                (0, 3, 0.9),
                (3, 5, 0.9),
                (5, 4, 0.5),
                (0, 2, 0.5),
                (2, 4, 0.5),
                (0, 1, 0.5),
                (1, 4, 0.7),
            ],
        );
        assert_eq!(widest_path(&g, 0, 4, &[]).unwrap().nodes(), &[0, 1, 4]);
        assert_eq!(widest_path(&g, 0, 4, &[1]).unwrap().nodes(), &[0, 2, 4]);
        assert_eq!(
            widest_path(&g, 0, 4, &[1, 2]).unwrap().nodes(),
            &[0, 3, 5, 4]
        );
    }

    #[test]
    fn maximin_is_not_fewest_hops_first() {
        // the wide route is long; a narrow direct edge must lose
        let g = graph(4, &[(0, 3, 0.2), (0, 1, 0.8), (1, 2, 0.8), (2, 3, 0.8)]);
        let p = widest_path(&g, 0, 3, &[]).unwrap();
        assert_eq!(p.nodes(), &[0, 1, 2, 3]);
        assert_eq!(shortest_simple_path(&g, 0, 3).unwrap(), vec![0, 3]);
    }

    #[test]
    fn diamond_trail() {
        let g = two_routes(0.7, 0.7, 0.7, 0.7);
        let trail = extract_trail(&g, 0, 3, 2).unwrap();
        let interiors: Vec<_> = trail
            .storylines
            .iter()
            .map(|s| s.interior().to_vec())
            .collect();
        assert_eq!(interiors, vec![vec![1], vec![2]]);
        assert!(!trail.exhausted);

        let trail = extract_trail(&g, 0, 3, 3).unwrap();
        assert_eq!(trail.storylines.len(), 2);
        assert!(trail.exhausted);

        let single = extract_trail(&g, 0, 3, 1).unwrap();
        assert_eq!(single.storylines, vec![widest_path(&g, 0, 3, &[]).unwrap()]);
        assert_eq!(extract_trail(&g, 0, 3, 0), Err(PathError::ZeroK));
        assert!(matches!(
            extract_trail(&g, 3, 0, 2),
            Err(PathError::NoPath { .. })
        ));
    }

    #[test]
    fn direct_edge_is_used_once() {
        let g = graph(3, &[(0, 2, 0.9), (0, 1, 0.5), (1, 2, 0.5)]);
        let trail = extract_trail(&g, 0, 2, 3).unwrap();
        let paths: Vec<_> = trail
            .storylines
            .iter()
            .map(|s| s.nodes().to_vec())
            .collect();
        assert_eq!(paths, vec![vec![0, 2], vec![0, 1, 2]]);
        assert!(trail.exhausted);
    }

    #[test]
    fn storyline_validation() {
        let g = two_routes(0.9, 0.5, 0.6, 0.6);
        assert_eq!(
            Storyline::from_nodes(&g, vec![0]),
            Err(PathError::TooShort(1))
        );
        assert_eq!(
            Storyline::from_nodes(&g, vec![0, 3]),
            Err(PathError::MissingEdge { u: 0, v: 3 })
        );
        assert_eq!(
            Storyline::from_nodes(&g, vec![0, 1, 0]),
            Err(PathError::RepeatedNode(0))
        );
        let s = Storyline::from_nodes(&g, vec![0, 1, 3]).unwrap();
        assert_eq!(s.weights(), &[0.9, 0.5]);
        assert_eq!(s.bottleneck(), 0.5);
        assert!((s.reliability() - 0.45f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn equal_weights_give_equal_reliability() {
        let (b, r) = bottleneck_and_reliability(&[0.7, 0.7, 0.7]);
        assert_eq!(b, r);
        let (b, r) = bottleneck_and_reliability(&[0.7, 0.70001, 0.7]);
        assert!(r > b);
    }

    #[test]
    fn redundancy_removes_middle_document() {
        let g = graph(3, &[(0, 1, 0.8), (1, 2, 0.9), (0, 2, 0.75)]);
        let s = Storyline::from_nodes(&g, vec![0, 1, 2]).unwrap();
        let reduced = reduce_redundancy(&s, &g, 0.2);
        assert_eq!(reduced.nodes(), &[0, 2]);
        assert_eq!(reduced.weights(), &[0.75]);
        assert_eq!(reduced.bottleneck(), 0.75);
    }

    #[test]
    fn redundancy_keeps_needed_document() {
        let g = graph(3, &[(0, 1, 0.8), (1, 2, 0.9), (0, 2, 0.5)]);
        let s = Storyline::from_nodes(&g, vec![0, 1, 2]).unwrap();
        assert_eq!(reduce_redundancy(&s, &g, 0.0), s);
        let pair = Storyline::from_nodes(&g, vec![0, 2]).unwrap();
        assert_eq!(reduce_redundancy(&pair, &g, 0.2), pair);
    }

    #[test]
    fn redundancy_rescans_same_position() {
        // 0-1-2-3 with shortcuts 0->2 then 0->3
        let g = graph(
            4,
            &[
                (0, 1, 0.8),
                (1, 2, 0.8),
                (2, 3, 0.8),
                (0, 2, 0.79),
                (0, 3, 0.78),
            ],
        );
        let s = Storyline::from_nodes(&g, vec![0, 1, 2, 3]).unwrap();
        let reduced = reduce_redundancy(&s, &g, 0.05);
        assert_eq!(reduced.nodes(), &[0, 3]);
        assert_eq!(reduced.weights(), &[0.78]);
    }

    #[test]
    fn chained_shortcuts_stay_above_floor() {
        // without the floor, 0->3 at 0.19 would pass against R = sqrt(0.3 * 0.5)
        let g = graph(
            4,
            &[
                (0, 1, 0.5),
                (1, 2, 0.5),
                (2, 3, 0.5),
                (0, 2, 0.3),
                (0, 3, 0.19),
            ],
        );
        let s = Storyline::from_nodes(&g, vec![0, 1, 2, 3]).unwrap();
        let reduced = reduce_redundancy(&s, &g, 0.2);
        assert_eq!(reduced.nodes(), &[0, 2, 3]);
        assert!(reduced.bottleneck() >= s.bottleneck() - 0.2 - 1e-12);
    }
}
