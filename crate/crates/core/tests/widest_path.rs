use rand::Rng;
use storyline_core::pathfind::{
    extract_trail, reduce_redundancy, shortest_simple_path, widest_path,
};
use storyline_core::PathError;
use storyline_testkit::{all_simple_paths, exhaustive_widest, random_digraph, rng};

#[test]
fn widest_path_matches_enumeration() {
    let mut r = rng(2024);
    for _ in 0..150 {
        let n = r.random_range(2..=9);
        let g = random_digraph(&mut r, n, 0.35);
        let (s, t) = (0, n - 1);
        match (widest_path(&g, s, t, &[]), exhaustive_widest(&g, s, t)) {
            (Ok(story), Some(best)) => {
                assert_eq!(story.bottleneck(), best);
                assert_eq!((story.source(), story.target()), (s, t));
                for (w, pair) in story.weights().iter().zip(story.nodes().windows(2)) {
                    assert_eq!(g.weight(pair[0], pair[1]), Some(*w));
                }
            }
            (Err(PathError::NoPath { .. }), None) => {}
            (got, want) => panic!("widest {got:?} vs oracle {want:?}"),
        }
    }
}

#[test]
fn widest_path_is_fewest_hops_among_optima() {
    let mut r = rng(8);
    for _ in 0..100 {
        let n = r.random_range(3..=8);
        let g = random_digraph(&mut r, n, 0.5);
        let Ok(story) = widest_path(&g, 0, n - 1, &[]) else {
            continue;
        };
        let optimal: Vec<Vec<usize>> = all_simple_paths(&g, 0, n - 1)
            .into_iter()
            .filter(|p| {
                p.windows(2)
                    .map(|w| g.weight(w[0], w[1]).unwrap())
                    .fold(f64::INFINITY, f64::min)
                    == story.bottleneck()
            })
            .collect();
        let expected = optimal
            .iter()
            .min_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)))
            .unwrap();
        assert_eq!(story.nodes(), expected.as_slice());
    }
}

#[test]
fn shortest_path_matches_enumeration() {
    let mut r = rng(77);
    for _ in 0..100 {
        let n = r.random_range(2..=8);
        let g = random_digraph(&mut r, n, 0.3);
        let expected = all_simple_paths(&g, 0, n - 1)
            .into_iter()
            .min_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        assert_eq!(shortest_simple_path(&g, 0, n - 1).ok(), expected);
    }
}

#[test]
fn trails_are_disjoint_and_non_increasing() {
    let mut r = rng(31);
    for _ in 0..100 {
        let n = r.random_range(3..=12);
        let g = random_digraph(&mut r, n, 0.4);
        let k = r.random_range(1..=5);
        let Ok(trail) = extract_trail(&g, 0, n - 1, k) else {
            assert!(exhaustive_widest(&g, 0, n - 1).is_none());
            continue;
        };
        assert!(!trail.storylines.is_empty() && trail.storylines.len() <= k);
        assert_eq!(trail.exhausted, trail.storylines.len() < k);
        let mut seen = vec![false; n];
        for story in &trail.storylines {
            for &x in story.interior() {
                assert!(!seen[x], "node {x} reused");
                seen[x] = true;
            }
        }
        for pair in trail.storylines.windows(2) {
            assert!(pair[1].bottleneck() <= pair[0].bottleneck());
        }
        let direct = trail.storylines.iter().filter(|s| s.len() == 2).count();
        assert!(direct <= 1);
    }
}

#[test]
fn reduction_keeps_endpoints_and_floor() {
    let mut r = rng(404);
    let delta = 0.2;
    let mut reduced_any = false;
    for _ in 0..200 {
        let n = r.random_range(3..=10);
        let g = random_digraph(&mut r, n, 0.6);
        let Ok(story) = widest_path(&g, 0, n - 1, &[]) else {
            continue;
        };
        let out = reduce_redundancy(&story, &g, delta);
        assert_eq!(
            (out.source(), out.target()),
            (story.source(), story.target())
        );
        assert!(out.bottleneck() >= story.bottleneck() - delta - 1e-12);
        assert!(out.nodes().iter().all(|x| story.nodes().contains(x)));
        for (w, pair) in out.weights().iter().zip(out.nodes().windows(2)) {
            assert_eq!(g.weight(pair[0], pair[1]), Some(*w));
        }
        reduced_any |= out.len() < story.len();
    }
    assert!(reduced_any);
}
