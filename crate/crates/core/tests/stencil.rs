//! Stencil descriptions of periodic builtins must agree with the analytic
//! oracles.

use endspace_core::endspace::EndSpace;
use endspace_core::graph::MultiDigraph;
use endspace_core::quotient::QuotientChain;
use endspace_core::sources::{Builtin, Certainty, Source, StencilSource};
use std::collections::BTreeSet;

fn arcs(g: &MultiDigraph) -> BTreeSet<(usize, usize)> {
    g.edges().iter().map(|e| (e.tail.0, e.head.0)).collect()
}

fn pairs() -> Vec<(Builtin, StencilSource)> {
    vec![
        (
            Builtin::SymmetricRay,
            StencilSource::new(1, vec![(0, 0, 1), (0, 0, -1)]).unwrap(),
        ),
        (
            // Two ray vertices per layer: u(2t) = t.0 and u(2t+1) = t.1.
            Builtin::SymmetricRay,
            StencilSource::new(2, vec![(0, 1, 0), (1, 0, 0), (1, 0, 1), (0, 1, -1)]).unwrap(),
        ),
        (
            Builtin::TwinRays,
            StencilSource::new(2, vec![(0, 0, 1), (0, 0, -1), (1, 1, 1), (1, 1, -1), (0, 1, 0)]).unwrap(),
        ),
    ]
}

#[test]
fn truncations_coincide() {
    for (b, st) in pairs() {
        for n in [0, 1, 5, 12] {
            assert_eq!(arcs(&b.truncation(n)), arcs(&st.truncation(n)), "{} at {n}", b.name());
        }
    }
}

#[test]
fn degrees_coincide() {
    for (b, st) in pairs() {
        for v in 0..10 {
            assert_eq!(b.degree(v).value, st.degree(v).value);
        }
    }
}

#[test]
fn levels_have_the_same_shape() {
    for (b, st) in pairs() {
        let cb = QuotientChain::build(&b, 6).unwrap();
        let cs = QuotientChain::build(&st, 6).unwrap();
        for (lb, ls) in cb.levels.iter().zip(&cs.levels) {
            assert_eq!(lb.class_count(), ls.class_count());
            assert_eq!(lb.graph.edge_count(), ls.graph.edge_count(), "{} level {}", b.name(), lb.n);
            let inf_b: Vec<bool> = lb.classes.iter().map(|c| c.is_infinite()).collect();
            let inf_s: Vec<bool> = ls.classes.iter().map(|c| c.is_infinite()).collect();
            assert_eq!(inf_b, inf_s);
        }
    }
}

#[test]
fn ends_and_limit_edges_agree() {
    for (b, st) in pairs() {
        for depth in [3, 6] {
            let eb = EndSpace::compute(&b, depth).unwrap();
            let es = EndSpace::compute(&st, depth).unwrap();
            assert_eq!(eb.ends.len(), es.ends.len());
            assert_eq!(eb.limit_edges.len(), es.limit_edges.len());
            assert_eq!(eb.certainty, Certainty::Exact);
        }
    }
}
