use qconn_core::connectivity::{
    brute_force_connectivity, dirac_condition, is_k_connected, local_connectivity, vertex_connectivity,
    vertex_connectivity_with, PairStrategy,
};
use qconn_core::graph::{enumerate_labeled_graphs, EnumerationMode, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::atomic::{AtomicU64, Ordering};

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn check_cut(g: &Graph, kappa: usize, cut: &[usize]) {
    assert_eq!(cut.len(), if cut.is_empty() { 0 } else { kappa });
    if !cut.is_empty() {
        assert!(g.is_separated_by(cut), "cut {cut:?} does not separate {g:?}");
    }
}

#[test]
fn flow_matches_brute_force_on_all_graphs_up_to_six() {
    for n in 1..=6 {
        let mismatches = AtomicU64::new(0);
        let summary = enumerate_labeled_graphs(
            n,
            EnumerationMode::All,
            |_| true,
            |g| {
                let flow = vertex_connectivity(g);
                let pruned = vertex_connectivity_with(g, PairStrategy::Pruned);
                let brute = brute_force_connectivity(g).unwrap();
                if flow.kappa != brute.kappa || pruned.kappa != brute.kappa {
                    mismatches.fetch_add(1, Ordering::Relaxed);
                }
                check_cut(g, flow.kappa, &flow.cut);
                check_cut(g, pruned.kappa, &pruned.cut);
                let complete = g.edge_count() == n * (n - 1) / 2;
                if g.is_connected() && !complete && n > 1 {
                    assert_eq!(flow.cut.len(), flow.kappa);
                }
            },
        )
        .unwrap();
        assert_eq!(summary.emitted, 1 << (n * (n - 1) / 2));
        assert_eq!(mismatches.into_inner(), 0, "n = {n}");
    }
}

#[test]
fn flow_matches_brute_force_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=12);
        let p = rng.gen_range(0.2..0.95);
        let g = random_graph(&mut rng, n, p);
        let flow = vertex_connectivity(&g);
        let brute = brute_force_connectivity(&g).unwrap();
        assert_eq!(flow.kappa, brute.kappa, "{g:?}");
        check_cut(&g, flow.kappa, &flow.cut);
        let pruned = vertex_connectivity_with(&g, PairStrategy::Pruned);
        assert_eq!(pruned.kappa, brute.kappa);
        for k in 1..n {
            let q = is_k_connected(&g, k);
            assert_eq!(q.k_connected, brute.kappa >= k && n > k, "{g:?} k={k}");
            if let Some(cut) = q.cut.filter(|c| !c.is_empty()) {
                assert!(cut.len() < k && g.is_separated_by(&cut));
            }
        }
    }
}

#[test]
fn menger_paths_match_cut_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 500 {
        let n = rng.gen_range(4..=40);
        let p = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, p);
        let non_edges: Vec<_> = g.complement().edges().collect();
        if non_edges.is_empty() {
            continue;
        }
        let (s, t) = non_edges[rng.gen_range(0..non_edges.len())];
        let local = local_connectivity(&g, s, t).unwrap();
        assert_eq!(local.paths.len(), local.cut.len());
        let mut used = vec![false; n];
        for path in &local.paths {
            assert_eq!((path[0], *path.last().unwrap()), (s, t));
            for w in path.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
            for &v in &path[1..path.len() - 1] {
                assert!(!used[v], "paths share vertex {v}");
                used[v] = true;
            }
        }
        let reach = g.components_without(&local.cut);
        let side = reach.iter().find(|c| c.contains(&s)).unwrap();
        assert!(!side.contains(&t));
        tested += 1;
    }
}

#[test]
fn dirac_condition_implies_k_connected() {
    for n in 2..=7 {
        enumerate_labeled_graphs(
            n,
            EnumerationMode::All,
            |g| g.is_connected(),
            |g| {
                for k in 1..n {
                    if dirac_condition(g, k) {
                        assert!(is_k_connected(g, k).k_connected, "{g:?} k={k}");
                    }
                }
            },
        )
        .unwrap();
    }
}
