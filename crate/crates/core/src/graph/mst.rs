use std::collections::VecDeque;

use crate::coherence::Coherence;

use super::GraphError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEdge {
    /// Smaller endpoint.
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxSpanningTree {
    n: usize,
    edges: Vec<TreeEdge>,
    bottleneck: f64,
}

impl MaxSpanningTree {
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Tree edges in the order Prim added them.
    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    /// Minimum edge weight of the tree, the value that holds it together.
    pub fn bottleneck(&self) -> f64 {
        self.bottleneck
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Number of tree edges whose weight equals the bottleneck.
    pub fn bottleneck_multiplicity(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| e.weight == self.bottleneck)
            .count()
    }

    /// The unique tree path from `s` to `t`, both included.
    pub fn path(&self, s: usize, t: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut prev = vec![usize::MAX; self.n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![t];
        let mut x = t;
        while x != s {
            x = prev[x];
            path.push(x);
        }
        path.reverse();
        path
    }

    /// Smallest weight on the tree path from `s` to `t`.
    pub fn path_bottleneck(&self, s: usize, t: usize) -> f64 {
        let weight = |a: usize, b: usize| {
            let (a, b) = (a.min(b), a.max(b));
            self.edges
                .iter()
                .find(|e| e.u == a && e.v == b)
                .map(|e| e.weight)
                .expect("consecutive path nodes share a tree edge")
        };
        self.path(s, t)
            .windows(2)
            .map(|w| weight(w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `(weight, pair)` ordering: heavier first, then the smaller index pair.
fn beats(w: f64, pair: (usize, usize), other_w: f64, other_pair: (usize, usize)) -> bool {
    w > other_w || (w == other_w && pair < other_pair)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Maximum spanning tree of the complete graph over `coherence`, by dense
/// Prim in O(n^2) time and O(n) extra space. Pairs are read one at a time,
/// so the complete edge set is never built.
///
/// Equal weights are ordered by the smaller `(min, max)` node pair, which
/// makes the tree unique for a given input.
pub fn build_max_spanning_tree<C: Coherence + ?Sized>(
    coherence: &C,
) -> Result<MaxSpanningTree, GraphError> {
    let n = coherence.len();
    if n < 2 {
        return Err(GraphError::TooFewNodes(n));
    }
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::NEG_INFINITY; n];
    let mut link = vec![0usize; n];
    in_tree[0] = true;
    for v in 1..n {
        key[v] = coherence.theta(0, v);
    }

    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut best: Option<usize> = None;
        for v in (0..n).filter(|&v| !in_tree[v]) {
            let better = match best {
                None => true,
                Some(b) => beats(key[v], ordered(link[v], v), key[b], ordered(link[b], b)),
            };
            if better {
                best = Some(v);
            }
        }
        let v = best.expect("a node remains outside the tree");
        in_tree[v] = true;
        let (a, b) = ordered(link[v], v);
        edges.push(TreeEdge {
            u: a,
            v: b,
            weight: key[v],
        });
        for x in 0..n {
            if in_tree[x] {
                continue;
            }
            let w = coherence.theta(v, x);
            if beats(w, ordered(v, x), key[x], ordered(link[x], x)) {
                key[x] = w;
                link[x] = v;
            }
        }
    }
    let bottleneck = edges.iter().map(|e| e.weight).fold(f64::INFINITY, f64::min);
    Ok(MaxSpanningTree {
        n,
        edges,
        bottleneck,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::CoherenceMatrix;

    fn sorted_pairs(tree: &MaxSpanningTree) -> Vec<(usize, usize)> {
        let mut pairs: Vec<_> = tree.edges().iter().map(|e| (e.u, e.v)).collect();
        pairs.sort_unstable();
        pairs
    }

    #[test]
    fn triangle() {
        let c = CoherenceMatrix::from_fn(3, |u, v| match (u, v) {
            (0, 1) => 0.9,
            (1, 2) => 0.8,
            _ => 0.3,
        });
        let tree = build_max_spanning_tree(&c).unwrap();
        assert_eq!(sorted_pairs(&tree), vec![(0, 1), (1, 2)]);
        assert_eq!(tree.bottleneck(), 0.8);
        assert_eq!(tree.path(0, 2), vec![0, 1, 2]);
        assert_eq!(tree.path_bottleneck(2, 0), 0.8);
    }

    #[test]
    fn two_nodes() {
        let c = CoherenceMatrix::from_fn(2, |_, _| 0.4);
        let tree = build_max_spanning_tree(&c).unwrap();
        assert_eq!(tree.edges().len(), 1);
        assert_eq!(tree.bottleneck(), 0.4);
    }

    #[test]
    fn uniform_weights_break_ties_by_pair() {
        let c = CoherenceMatrix::from_fn(5, |_, _| 0.6);
        let tree = build_max_spanning_tree(&c).unwrap();
        assert_eq!(tree.bottleneck(), 0.6);
        assert_eq!(sorted_pairs(&tree), vec![(0, 1), (0, 2), (0, 3), (0, 4)]);
    }

    #[test]
    fn too_few_nodes() {
        let c = CoherenceMatrix::from_fn(1, |_, _| 0.0);
        assert!(matches!(
            build_max_spanning_tree(&c),
            Err(GraphError::TooFewNodes(1))
        ));
    }
}
