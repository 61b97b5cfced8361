mod common;

use std::io::Cursor;

use kcore::fastk::{should_notify, switch_condition};
use kcore::{
    compute_index, fastk_run, gen, load_edge_list, parallelk_run, peel_coreness, sequentialk_run,
    FastConfig, Graph, Instrumentation, ParallelConfig, Strategy as Schedule,
};
use proptest::prelude::*;

use common::{index_by_definition, naive_coreness, nonisomorphic};

fn edges(max_n: u32, max_m: usize) -> impl Strategy<Value = (u32, Vec<(u32, u32)>)> {
    (1..=max_n).prop_flat_map(move |n| (Just(n), prop::collection::vec((0..n, 0..n), 0..=max_m)))
}

fn small_graph() -> impl Strategy<Value = Graph> {
    edges(24, 90).prop_map(|(n, e)| Graph::from_edges(n as usize, &e))
}

/// Graph with its node ids permuted.
fn relabel(g: &Graph, perm: &[u32]) -> Graph {
    let edges: Vec<_> = g
        .nodes()
        .flat_map(|u| {
            g.neighbors(u)
                .iter()
                .map(move |&v| (perm[u as usize], perm[v as usize]))
        })
        .collect();
    Graph::from_edges(g.node_count(), &edges)
}

#[test]
fn enumeration_matches_known_class_counts() {
    let counts: Vec<usize> = nonisomorphic(7).iter().map(Vec::len).collect();
    assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156, 1044]);
}

#[test]
fn switch_and_notify_examples() {
    assert!(switch_condition(255, 256));
    assert!(!switch_condition(256, 256));
    assert!(should_notify(2, 5, 3));
    assert!(!should_notify(2, 2, 3));
    assert!(!should_notify(4, 5, 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn loader_round_trips(g in small_graph()) {
        let mut text = Vec::new();
        g.write_edge_list(&mut text).unwrap();
        let back = load_edge_list(Cursor::new(text)).unwrap();
        let non_isolated = g.nodes().filter(|&u| g.degree(u) > 0).count();
        prop_assert_eq!(back.node_count(), non_isolated);
        prop_assert_eq!(back.edge_count(), g.edge_count());
        for u in back.nodes() {
            let orig = back.label(u) as u32;
            let mut mapped: Vec<u64> = back.neighbors(u).iter().map(|&v| back.label(v)).collect();
            mapped.sort_unstable();
            let expected: Vec<u64> = g.neighbors(orig).iter().map(|&v| v as u64).collect();
            prop_assert_eq!(mapped, expected);
        }
    }

    #[test]
    fn graph_is_simple_and_symmetric(g in small_graph()) {
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(g.adjacency().len(), 2 * g.edge_count());
        for u in g.nodes() {
            for v in g.nodes() {
                let linear = g.neighbors(u).contains(&v);
                prop_assert_eq!(g.has_edge(u, v), linear);
                prop_assert_eq!(g.has_edge(v, u), linear);
            }
            prop_assert!(!g.has_edge(u, u));
        }
    }

    #[test]
    fn peeling_matches_definition(g in small_graph()) {
        let peeled = peel_coreness(&g);
        prop_assert_eq!(peeled.coreness(), &naive_coreness(&g)[..]);
    }

    #[test]
    fn coreness_is_label_independent(g in small_graph(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<u32> = g.nodes().collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let core = peel_coreness(&g);
        let moved = peel_coreness(&relabel(&g, &perm));
        for u in g.nodes() {
            prop_assert_eq!(core.get(u), moved.get(perm[u as usize]));
        }
    }

    #[test]
    fn coreness_never_grows_when_edges_are_removed((n, e) in edges(20, 70), drop in any::<prop::sample::Index>()) {
        let g = Graph::from_edges(n as usize, &e);
        let mut fewer = e.clone();
        if !fewer.is_empty() {
            fewer.remove(drop.index(fewer.len()));
        }
        let sub = Graph::from_edges(n as usize, &fewer);
        let (big, small) = (peel_coreness(&g), peel_coreness(&sub));
        for u in g.nodes() {
            prop_assert!(small.get(u) <= big.get(u));
            prop_assert!(big.get(u) as usize <= g.degree(u));
        }
    }

    #[test]
    fn compute_index_matches_definition(
        est in prop::collection::vec(prop_oneof![0u32..60, Just(u32::MAX)], 0..50),
        cur in prop_oneof![0u32..60, Just(u32::MAX)],
    ) {
        prop_assert_eq!(compute_index(&est, cur), index_by_definition(&est, cur));
    }

    #[test]
    fn extended_notify_refines_plain_guard(new in 0u32..40, drop in 0u32..40, est_v in 0u32..80) {
        let old = new + drop;
        if should_notify(new, old, est_v) {
            prop_assert!(est_v > new);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn engines_equal_oracle(
        g in small_graph(),
        threads in 1usize..5,
        batch in 1usize..9,
        strategy in prop::sample::select(Schedule::ALL.to_vec()),
        flags in any::<[bool; 5]>(),
    ) {
        let truth = peel_coreness(&g);
        prop_assert_eq!(&sequentialk_run(&g, Instrumentation::none()).0, &truth);
        let pcfg = ParallelConfig {
            single_round: flags[0],
            selective_send: flags[1],
            sorted_neighbors: flags[2],
            ..ParallelConfig::new(threads, batch, strategy)
        };
        let instr = Instrumentation::convergence(&truth);
        let (r, report) = parallelk_run(&g, &pcfg, instr).unwrap();
        prop_assert_eq!(&r, &truth);
        prop_assert_eq!(report.monotonicity_violations + report.soundness_violations, 0);
        let fcfg = FastConfig { hybrid_tail: flags[3], extended_notify: flags[4], ..FastConfig::new(threads, batch) };
        let instr = Instrumentation { audit_activation: true, ..Instrumentation::convergence(&truth) };
        let (r, report) = fastk_run(&g, &fcfg, instr).unwrap();
        prop_assert_eq!(&r, &truth);
        prop_assert_eq!(report.monotonicity_violations + report.soundness_violations, 0);
        prop_assert_eq!(report.activation_violations, 0);
        prop_assert_eq!(report.final_error(), Some(0.0));
    }
}

#[test]
fn fastk_matches_sequentialk_on_generated_graphs() {
    let graphs = [
        gen::chung_lu(5_000, 10.0, 2.3, 5),
        gen::road_grid(70, 70, 0.85, 0.25, 9),
        gen::gnp(300, 0.05, 2),
    ];
    for g in &graphs {
        let (seq, _) = sequentialk_run(g, Instrumentation::none());
        for threads in [1, 2, 4, 8, 16] {
            let truth = peel_coreness(g);
            let instr = Instrumentation {
                audit_activation: true,
                ..Instrumentation::convergence(&truth)
            };
            let (fast, report) = fastk_run(g, &FastConfig::new(threads, 64), instr).unwrap();
            assert_eq!(fast, seq);
            assert_eq!(report.activation_violations, 0);
            let last = report.trace.last().unwrap();
            assert_eq!((last.mean_error, last.active_fraction), (0.0, 0.0));
        }
    }
}
