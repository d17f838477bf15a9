//! Structural invariants checked over randomly generated inputs.

use artin_hhs::classify::{hopf_verdict, odd_decomposition, type_flags, Outcome};
use artin_hhs::graph::{parse_graph, LabelledGraph};
use artin_hhs::presentation::{artin_presentation, parse_presentation};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct GraphSpec {
    n: usize,
    labels: Vec<Option<u32>>,
}

fn arb_graph_spec() -> impl Strategy<Value = GraphSpec> {
    (1usize..=6).prop_flat_map(|n| {
        let slots = n * (n - 1) / 2;
        proptest::collection::vec(proptest::option::of(2u32..=8), slots)
            .prop_map(move |labels| GraphSpec { n, labels })
    })
}

fn realize(spec: &GraphSpec, order: &[usize]) -> LabelledGraph {
    let mut g = LabelledGraph::new();
    let ids: Vec<_> = (0..spec.n)
        .map(|i| g.add_vertex(&format!("v{}", order[i])).unwrap())
        .collect();
    let mut slot = 0;
    for a in 0..spec.n {
        for b in a + 1..spec.n {
            if let Some(m) = spec.labels[slot] {
                g.add_edge(ids[a], ids[b], m).unwrap();
            }
            slot += 1;
        }
    }
    g
}

proptest! {
    /// Serialising and re-reading a graph is lossless.
    #[test]
    fn graph_serialisation_round_trips(spec in arb_graph_spec()) {
        let order: Vec<usize> = (0..spec.n).collect();
        let g = realize(&spec, &order);
        let back = parse_graph(&g.serialize()).unwrap();
        prop_assert_eq!(g, back);
    }

    /// The verdict depends on the shape of the graph, not on vertex names
    /// or insertion order.
    #[test]
    fn verdict_ignores_vertex_names(spec in arb_graph_spec(), seed in 0u64..1000) {
        let identity: Vec<usize> = (0..spec.n).collect();
        let mut shuffled = identity.clone();
        // cheap deterministic shuffle driven by the seed
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = hopf_verdict(&realize(&spec, &identity));
        let b = hopf_verdict(&realize(&spec, &shuffled));
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert_eq!(a.branch, b.branch);
        prop_assert_eq!(a.obstructions.len(), b.obstructions.len());
    }

    /// Whenever the applicability hypotheses all hold, the verdict commits
    /// to HOPFIAN; it never leaves such a graph UNKNOWN.
    #[test]
    fn applicable_graphs_get_a_hopfian_verdict(spec in arb_graph_spec()) {
        let order: Vec<usize> = (0..spec.n).collect();
        let g = realize(&spec, &order);
        let flags = type_flags(&g);
        if flags.large && flags.hyperbolic && odd_decomposition(&g).hanging_ok() {
            prop_assert_eq!(hopf_verdict(&g).outcome, Outcome::Hopfian);
        }
    }

    /// The star of a vertex is its link plus the vertex itself.
    #[test]
    fn star_is_link_plus_centre(spec in arb_graph_spec()) {
        let order: Vec<usize> = (0..spec.n).collect();
        let g = realize(&spec, &order);
        for v in g.vertices() {
            let mut expected = g.link(v);
            expected.push(v);
            expected.sort();
            let mut star = g.star(v);
            star.sort();
            prop_assert_eq!(star, expected);
        }
    }

    /// Presentations survive the text format unchanged.
    #[test]
    fn presentation_serialisation_round_trips(spec in arb_graph_spec()) {
        let order: Vec<usize> = (0..spec.n).collect();
        let p = artin_presentation(&realize(&spec, &order));
        let back = parse_presentation(&p.serialize()).unwrap();
        prop_assert_eq!(p.serialize(), back.serialize());
    }
}
