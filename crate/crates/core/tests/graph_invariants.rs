use proptest::prelude::*;
use qconn_core::graph::{degree_profile, disjoint_union, join, Graph};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut it = bits.into_iter();
            for v in 1..n {
                for u in 0..v {
                    if it.next().unwrap() {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        })
    })
}

fn degree_sum_is_twice_edges(g: &Graph) -> bool {
    let p = degree_profile(g);
    p.degrees.iter().sum::<usize>() == 2 * p.edge_count && p.edge_count == g.edge_count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn join_and_union_edge_counts(g in arb_graph(20), h in arb_graph(20)) {
        let j = join(&g, &h);
        let u = disjoint_union(&g, &h);
        prop_assert_eq!(j.order(), g.order() + h.order());
        prop_assert_eq!(j.edge_count(), g.edge_count() + h.edge_count() + g.order() * h.order());
        prop_assert_eq!(u.edge_count(), g.edge_count() + h.edge_count());
        for x in [&g, &h, &j, &u] {
            prop_assert!(degree_sum_is_twice_edges(x));
        }
    }

    #[test]
    fn complement_and_relabel_preserve_structure(g in arb_graph(30), seed in any::<u64>()) {
        let n = g.order();
        let c = g.complement();
        prop_assert_eq!(c.edge_count() + g.edge_count(), n * n.saturating_sub(1) / 2);
        prop_assert_eq!(c.complement(), g.clone());
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let r = g.relabel(&perm);
        prop_assert_eq!(r.edge_count(), g.edge_count());
        for (u, v) in g.edges() {
            prop_assert!(r.has_edge(perm[u], perm[v]));
        }
        prop_assert_eq!(r.is_connected(), g.is_connected());
    }
}
