use proptest::prelude::*;

use shift_lock::debruijn::build_graph;
use shift_lock::digraph::WeightedDigraph;
use shift_lock::mean_cycle::{enumerate_cycles, gap, gap_by_enumeration, max_mean_cycle_karp};
use shift_lock::symbolic::Word;

fn digraph() -> impl Strategy<Value = WeightedDigraph> {
    (1usize..7).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, -4.0f64..4.0), 1..3 * n)
            .prop_map(move |arcs| WeightedDigraph::new(n, &arcs).unwrap())
    })
}

proptest! {
    #[test]
    fn karp_dominates_every_cycle(g in digraph()) {
        let cycles = enumerate_cycles(&g).unwrap();
        match max_mean_cycle_karp(&g) {
            Ok(r) => {
                prop_assert!(!cycles.is_empty());
                for (_, m) in &cycles {
                    prop_assert!(*m <= r.max_mean + 1e-12);
                }
                prop_assert!(cycles.iter().any(|(c, _)| *c == r.witness_cycle));
            }
            Err(_) => prop_assert!(cycles.is_empty()),
        }
    }

    #[test]
    fn deletion_gap_matches_enumeration(weights in prop::collection::vec(-1.0f64..1.0, 8)) {
        let g = build_graph(3).unwrap().with_weights(weights).unwrap();
        let a = gap(&g).unwrap().gap;
        let b = gap_by_enumeration(&g).unwrap().gap;
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn word_index_round_trips(len in 0usize..20, raw in any::<u64>()) {
        let index = if len == 0 { 0 } else { raw % (1u64 << len) };
        let w = Word::from_index(index, len);
        prop_assert_eq!(w.index(), index);
        prop_assert_eq!(w.len(), len);
        let parsed: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &w);
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w);
    }

    #[test]
    fn digraph_json_round_trips(g in digraph()) {
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = WeightedDigraph::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.to_json(), g.to_json());
    }
}
