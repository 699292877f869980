use paritylab::deficiency::deficiency;
use paritylab::factor::{build_parity_gadget, find_parity_factor, verify_factor};
use paritylab::generators::random_regular;
use paritylab::graph::{Graph, VertexSet};
use paritylab::parity::ParitySpec;
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..10).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::new(n, edges).unwrap()
        })
    })
}

/// Per vertex: lower bound, extra even slack, and the S/T/neither class.
fn instance() -> impl Strategy<Value = (Graph, ParitySpec, VertexSet, VertexSet)> {
    graph().prop_flat_map(|g| {
        let n = g.order();
        (Just(g), proptest::collection::vec((0usize..5, 0usize..3, 0u8..3), n)).prop_map(move |(g, per)| {
            let lower: Vec<usize> = per.iter().map(|p| p.0).collect();
            let upper: Vec<usize> = per.iter().map(|p| p.0 + 2 * p.1).collect();
            let pick = |c: u8| VertexSet::new(n, (0..n).filter(|&v| per[v].2 == c)).unwrap();
            (g, ParitySpec::new(lower, upper).unwrap(), pick(1), pick(2))
        })
    })
}

proptest! {
    #[test]
    fn deficiency_parity_matches_upper_sum((g, spec, s, t) in instance()) {
        let w = deficiency(&g, &spec, &s, &t).unwrap();
        let f_total = spec.upper_sum(0..g.order()) as i64;
        prop_assert_eq!((w.delta - f_total).rem_euclid(2), 0);
        prop_assert_eq!(w.tau, w.odd_components.len());
    }

    #[test]
    fn found_factors_verify((g, spec, _, _) in instance()) {
        if let Some(f) = find_parity_factor(&g, &spec).unwrap().factor() {
            prop_assert_eq!(verify_factor(&g, &spec, f), Ok(()));
            prop_assert_eq!(f.degrees().iter().sum::<usize>(), 2 * f.size());
        }
    }

    #[test]
    fn gadget_size_law((g, spec, _, _) in instance()) {
        let n = g.order();
        let lower: Vec<usize> = (0..n).map(|v| spec.lower(v).min(g.degree(v))).collect();
        let upper = (0..n).map(|v| lower[v] + spec.upper(v) - spec.lower(v)).collect();
        let spec = ParitySpec::new(lower, upper).unwrap();
        let gadget = build_parity_gadget(&g, &spec).unwrap();
        let lower = spec.lower_sum(0..g.order());
        prop_assert_eq!(gadget.graph.order() + lower, 4 * g.size());
        if lower % 2 == 1 {
            prop_assert!(!find_parity_factor(&g, &spec).unwrap().is_found());
        }
    }

    #[test]
    fn text_round_trip(g in graph()) {
        prop_assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn handshake_and_components((g, _, s, t) in instance()) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.size());
        let removed = s.union(&t);
        let comps = g.components_after_removal(&removed).unwrap();
        prop_assert_eq!(comps.iter().map(|c| c.order()).sum::<usize>() + removed.len(), g.order());
        let mins: Vec<usize> = comps.iter().map(|c| c.vertices.members()[0]).collect();
        prop_assert!(mins.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn complement_factor_duality(seed in any::<u64>(), n in 4usize..13, r in 2usize..7, a in 0usize..6, gap in 0usize..3) {
        prop_assume!(r < n && n * r % 2 == 0);
        let b = a + 2 * gap;
        prop_assume!(b <= r);
        let g = random_regular(n, r, seed, 10_000).unwrap();
        let direct = find_parity_factor(&g, &ParitySpec::constant(a, b, n).unwrap()).unwrap();
        let dual = find_parity_factor(&g, &ParitySpec::constant(r - b, r - a, n).unwrap()).unwrap();
        prop_assert_eq!(direct.is_found(), dual.is_found());
    }
}
