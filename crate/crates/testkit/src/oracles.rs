use storyline_core::coherence::Coherence;
use storyline_core::graph::SparseCoherenceGraph;

/// Largest minimum edge weight over every simple `s -> t` path, found by
/// depth-first enumeration. `None` when `t` is unreachable.
pub fn exhaustive_widest(graph: &SparseCoherenceGraph, s: usize, t: usize) -> Option<f64> {
    fn walk(
        graph: &SparseCoherenceGraph,
        u: usize,
        t: usize,
        bottleneck: f64,
        on_path: &mut [bool],
        best: &mut Option<f64>,
    ) {
        if u == t {
            if best.is_none_or(|b| bottleneck > b) {
                *best = Some(bottleneck);
            }
            return;
        }
        for e in graph.out_edges(u) {
            if on_path[e.target] {
                continue;
            }
            on_path[e.target] = true;
            walk(graph, e.target, t, bottleneck.min(e.weight), on_path, best);
            on_path[e.target] = false;
        }
    }
    let mut on_path = vec![false; graph.node_count()];
    on_path[s] = true;
    let mut best = None;
    walk(graph, s, t, f64::INFINITY, &mut on_path, &mut best);
    best
}

/// Every simple `s -> t` path as a node sequence.
pub fn all_simple_paths(graph: &SparseCoherenceGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(
        graph: &SparseCoherenceGraph,
        t: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        for e in graph.out_edges(u) {
            if on_path[e.target] {
                continue;
            }
            on_path[e.target] = true;
            path.push(e.target);
            walk(graph, t, path, on_path, out);
            path.pop();
            on_path[e.target] = false;
        }
    }
    let mut on_path = vec![false; graph.node_count()];
    on_path[s] = true;
    let mut out = Vec::new();
    walk(graph, t, &mut vec![s], &mut on_path, &mut out);
    out
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Widest-path bottleneck in an undirected edge list by threshold sweep:
/// the largest weight `w` such that edges of weight `>= w` connect `s` and `t`.
pub fn threshold_widest_undirected(
    n: usize,
    edges: &[(usize, usize, f64)],
    s: usize,
    t: usize,
) -> Option<f64> {
    let mut thresholds: Vec<f64> = edges.iter().map(|e| e.2).collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    thresholds.into_iter().find(|&w| {
        let mut dsu = Dsu::new(n);
        for &(u, v, x) in edges {
            if x >= w {
                dsu.union(u, v);
            }
        }
        dsu.find(s) == dsu.find(t)
    })
}

/// Total weight of a maximum spanning tree by Kruskal over all pairs.
pub fn kruskal_max_total<C: Coherence + ?Sized>(coherence: &C) -> f64 {
    let n = coherence.len();
    let mut pairs: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .map(|(u, v)| (coherence.theta(u, v), u, v))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut dsu = Dsu::new(n);
    pairs
        .into_iter()
        .filter(|&(_, u, v)| dsu.union(u, v))
        .map(|(w, _, _)| w)
        .sum()
}

/// Decodes a Prüfer sequence into the edges of a labelled tree.
fn prufer_edges(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&x| degree[x] == 1).unwrap();
        edges.push((leaf, c));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&x| degree[x] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Largest spanning-tree total over all `n^(n-2)` labelled trees.
pub fn enumerated_max_spanning_total<C: Coherence + ?Sized>(coherence: &C) -> f64 {
    let n = coherence.len();
    assert!((2..=8).contains(&n), "enumeration is for tiny graphs");
    let len = n - 2;
    let mut code = vec![0usize; len];
    let mut best = f64::NEG_INFINITY;
    loop {
        let total: f64 = prufer_edges(&code, n)
            .into_iter()
            .map(|(u, v)| coherence.theta(u, v))
            .sum();
        best = best.max(total);
        let mut i = 0;
        loop {
            if i == len {
                return best;
            }
            code[i] += 1;
            if code[i] < n {
                break;
            }
            code[i] = 0;
            i += 1;
        }
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Minimum total cost over every monotone warping path, by enumeration.
pub fn brute_force_dtw<P: AsRef<[f64]>>(a: &[P], b: &[P]) -> f64 {
    fn walk<P: AsRef<[f64]>>(a: &[P], b: &[P], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + euclid(a[i].as_ref(), b[j].as_ref());
        if i + 1 == a.len() && j + 1 == b.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best
}

/// Base-2 JSD through entropies, `H(M) - (H(P) + H(Q)) / 2`.
pub fn entropy_jsd(p: &[f64], q: &[f64]) -> f64 {
    let h = |d: &[f64]| -> f64 { d.iter().filter(|x| **x > 0.0).map(|x| -x * x.log2()).sum() };
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a + b) / 2.0).collect();
    h(&m) - 0.5 * (h(p) + h(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prufer_covers_cayley_count() {
        // 4^2 codes, each a distinct spanning tree of K4
        let mut seen = std::collections::HashSet::new();
        for a in 0..4 {
            for b in 0..4 {
                let mut e: Vec<_> = prufer_edges(&[a, b], 4)
                    .into_iter()
                    .map(|(u, v)| (u.min(v), u.max(v)))
                    .collect();
                e.sort_unstable();
                seen.insert(e);
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn brute_dtw_small() {
        let a = [[0.0], [2.0]];
        let b = [[0.0], [1.0], [2.0]];
        assert_eq!(brute_force_dtw(&a, &b), 1.0);
    }

    #[test]
    fn entropy_jsd_known_value() {
        assert!((1.0 - entropy_jsd(&[1.0, 0.0], &[0.5, 0.5]) - 0.688722).abs() < 1e-6);
    }
}
