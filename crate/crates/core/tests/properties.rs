use endspace_core::endspace::EndSpace;
use endspace_core::graph::{find_euler_tour, is_valid_walk, VertexId, WalkRequirements};
use endspace_core::quotient::{verify_system, QuotientChain};
use endspace_core::sources::{Builtin, FiniteSource, Source};
use endspace_core::tours::{check_euler, lift_euler, span_walk, verify_thread, DEFAULT_TOUR_LIMIT};
use proptest::prelude::*;
use std::collections::BTreeSet;

fn finite(n: usize, arcs: Vec<(usize, usize)>) -> FiniteSource {
    FiniteSource::new("p", (0..n).map(|i| format!("v{i}")).collect(), arcs).unwrap()
}

/// Arcs of a union of closed walks through the given vertex sequences.
fn cycles(n: usize, walks: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for w in walks {
        let mut w: Vec<usize> = w.iter().map(|v| v % n).collect();
        w.dedup();
        while w.len() > 1 && w.first() == w.last() {
            w.pop();
        }
        if w.len() < 2 {
            continue;
        }
        for i in 0..w.len() {
            out.push((w[i], w[(i + 1) % w.len()]));
        }
    }
    out
}

fn arb_digraph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..7).prop_flat_map(|n| {
        let arc = (0..n, 0..n).prop_filter("no loops", |(a, b)| a != b);
        (Just(n), prop::collection::vec(arc, 0..14))
    })
}

fn arb_eulerian() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..7).prop_flat_map(|n| {
        let walks = prop::collection::vec(prop::collection::vec(0..n, 2..6), 0..4);
        // A spine cycle keeps the underlying graph connected.
        walks.prop_map(move |mut ws| {
            ws.push((0..n).collect());
            (n, cycles(n, &ws))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_system_laws_hold((n, arcs) in arb_digraph()) {
        let s = finite(n, arcs);
        prop_assert!(verify_system(&s, n).unwrap().passed());
    }

    #[test]
    fn check_euler_agrees_with_vertex_balance((n, arcs) in arb_digraph()) {
        let balanced = (0..n).all(|v| {
            arcs.iter().filter(|a| a.0 == v).count() == arcs.iter().filter(|a| a.1 == v).count()
        });
        prop_assert_eq!(check_euler(&finite(n, arcs), n).unwrap().is_ok(), balanced);
    }

    #[test]
    fn eulerian_digraphs_lift((n, arcs) in arb_eulerian()) {
        let s = finite(n, arcs);
        prop_assert!(check_euler(&s, n).unwrap().is_ok());
        let chain = QuotientChain::build(&s, n).unwrap();
        let g = &chain.levels[n].graph;
        let tour = find_euler_tour(g).unwrap();
        prop_assert!(is_valid_walk(g, &tour, WalkRequirements::EULER_TOUR).ok);
        let t = lift_euler(&s, n, 0, DEFAULT_TOUR_LIMIT).unwrap();
        prop_assert!(t.complete);
        prop_assert!(verify_thread(&chain, &t).ok);
    }

    #[test]
    fn strongly_connected_digraphs_span((n, arcs) in arb_eulerian(), extra in prop::collection::vec((0usize..7, 0usize..7), 0..5)) {
        let mut arcs = arcs;
        arcs.extend(extra.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b));
        let s = finite(n, arcs);
        let t = span_walk(&s, n).unwrap();
        let chain = QuotientChain::build(&s, n).unwrap();
        prop_assert!(verify_thread(&chain, &t).ok);
        let top = &chain.levels[n].graph;
        prop_assert!(is_valid_walk(top, t.walks.last().unwrap(), WalkRequirements::CLOSED_SPANNING).ok);
    }

    #[test]
    fn truncations_are_nested(n in 0usize..20, extra in 0usize..10, which in 0usize..8) {
        let b = [
            Builtin::Ray, Builtin::ReverseRay, Builtin::SymmetricRay, Builtin::ZChain,
            Builtin::OutStar, Builtin::TwinRays, Builtin::DominatedRay, Builtin::Necklace(3),
        ][which];
        let small = b.truncation(n);
        let big = b.truncation(n + extra);
        let keep: BTreeSet<VertexId> = (0..n).map(VertexId).collect();
        let (sub, _) = big.induced(&keep);
        let arcs = |g: &endspace_core::graph::MultiDigraph| {
            let mut v: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.tail.0, e.head.0)).collect();
            v.sort();
            v
        };
        prop_assert_eq!(arcs(&small), arcs(&sub));
        prop_assert_eq!(small.labels(), sub.labels());
    }

    #[test]
    fn end_counts_are_monotone(depth in 1usize..8) {
        for b in [Builtin::SymmetricRay, Builtin::TwinRays, Builtin::Necklace(2)] {
            let e = EndSpace::compute(&b, depth).unwrap();
            prop_assert!(e.ends_per_level.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
