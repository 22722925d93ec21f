use rand::Rng;
use storyline_core::coherence::CoherenceMatrix;
use storyline_core::graph::build_max_spanning_tree;
use storyline_core::Coherence;
use storyline_testkit::{
    edge_list_coherence, enumerated_max_spanning_total, kruskal_max_total,
    random_connected_undirected, rng, threshold_widest_undirected, unit_weight,
};

fn dense_random(seed: u64, n: usize) -> CoherenceMatrix {
    let mut r = rng(seed);
    let w: Vec<f64> = (0..n * n).map(|_| unit_weight(&mut r)).collect();
    CoherenceMatrix::from_fn(n, move |u, v| w[u.min(v) * n + u.max(v)])
}

#[test]
fn prim_matches_prufer_enumeration() {
    for seed in 0..40 {
        let n = 3 + (seed as usize % 5);
        let c = dense_random(seed, n);
        let tree = build_max_spanning_tree(&c).unwrap();
        let best = enumerated_max_spanning_total(&c);
        assert!(
            (tree.total_weight() - best).abs() <= 1e-12,
            "seed {seed}: {} vs {best}",
            tree.total_weight()
        );
    }
}

#[test]
fn prim_matches_kruskal() {
    for (seed, n) in [(1u64, 2usize), (2, 17), (3, 64), (4, 130), (5, 200)] {
        let c = dense_random(seed, n);
        let tree = build_max_spanning_tree(&c).unwrap();
        assert_eq!(tree.edges().len(), n - 1);
        assert!((tree.total_weight() - kruskal_max_total(&c)).abs() <= 1e-9);
    }
}

#[test]
fn quantized_weights_give_a_stable_tree() {
    // heavy ties: the tree must not depend on anything but the input
    let n = 30;
    let c = CoherenceMatrix::from_fn(n, |u, v| ((u * 7 + v * 3) % 4 + 1) as f64 / 4.0);
    let a = build_max_spanning_tree(&c).unwrap();
    let b = build_max_spanning_tree(&c).unwrap();
    assert_eq!(a.edges(), b.edges());
    assert!((a.total_weight() - kruskal_max_total(&c)).abs() <= 1e-12);
}

#[test]
fn tree_paths_are_widest_paths() {
    let mut r = rng(99);
    for _ in 0..30 {
        let n = r.random_range(2..=12);
        let edges = random_connected_undirected(&mut r, n, 0.3);
        let c = edge_list_coherence(n, &edges);
        let tree = build_max_spanning_tree(&c).unwrap();
        for s in 0..n {
            for t in s + 1..n {
                let path = tree.path(s, t);
                assert_eq!((path[0], *path.last().unwrap()), (s, t));
                let expected = threshold_widest_undirected(n, &edges, s, t).unwrap();
                assert_eq!(tree.path_bottleneck(s, t), expected);
                let along = path
                    .windows(2)
                    .map(|w| c.theta(w[0], w[1]))
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(along, expected);
            }
        }
    }
}
