//! Exhaustive comparison against brute force on every loopless digraph with
//! four vertices.

use endspace_core::graph::{find_euler_tour, is_valid_walk, strong_components, MultiDigraph, WalkRequirements};
use endspace_core::quotient::{verify_system, QuotientChain};
use endspace_core::sources::{solidity_check, FiniteSource, SolidityVerdict};
use endspace_core::tours::check_euler;
use std::collections::BTreeSet;

const N: usize = 4;

fn pairs() -> Vec<(usize, usize)> {
    (0..N)
        .flat_map(|a| (0..N).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect()
}

fn arcs_of(mask: u32) -> Vec<(usize, usize)> {
    pairs()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p)
        .collect()
}

/// Tries every way of chaining the arcs into one closed trail.
fn brute_euler(arcs: &[(usize, usize)]) -> bool {
    fn go(arcs: &[(usize, usize)], used: &mut Vec<bool>, at: usize, start: usize, left: usize) -> bool {
        if left == 0 {
            return at == start;
        }
        for i in 0..arcs.len() {
            if !used[i] && arcs[i].0 == at {
                used[i] = true;
                if go(arcs, used, arcs[i].1, start, left - 1) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }
    if arcs.is_empty() {
        return true;
    }
    let mut used = vec![false; arcs.len()];
    go(arcs, &mut used, arcs[0].0, arcs[0].0, arcs.len())
}

fn cut_sizes(arcs: &[(usize, usize)], side: u32) -> (usize, usize) {
    let inside = |v: usize| side >> v & 1 == 1;
    let fwd = arcs.iter().filter(|(a, b)| inside(*a) && !inside(*b)).count();
    let bwd = arcs.iter().filter(|(a, b)| !inside(*a) && inside(*b)).count();
    (fwd, bwd)
}

fn all_cuts_balanced(arcs: &[(usize, usize)]) -> bool {
    (1..(1u32 << N) - 1).all(|side| {
        let (f, b) = cut_sizes(arcs, side);
        f == b
    })
}

/// Vertices carrying arcs lie in one component of the underlying graph.
fn arcs_connected(arcs: &[(usize, usize)]) -> bool {
    let Some(&(first, _)) = arcs.first() else { return true };
    let mut seen = BTreeSet::from([first]);
    loop {
        let before = seen.len();
        for &(a, b) in arcs {
            if seen.contains(&a) || seen.contains(&b) {
                seen.insert(a);
                seen.insert(b);
            }
        }
        if seen.len() == before {
            break;
        }
    }
    arcs.iter().all(|(a, _)| seen.contains(a))
}

fn source(arcs: &[(usize, usize)]) -> FiniteSource {
    FiniteSource::new("g", (0..N).map(|i| format!("v{i}")).collect(), arcs.to_vec()).unwrap()
}

fn graph(arcs: &[(usize, usize)]) -> MultiDigraph {
    let mut g = MultiDigraph::with_order(N);
    for &(a, b) in arcs {
        g.add_arc(a, b).unwrap();
    }
    g
}

#[test]
fn euler_tours_match_brute_force() {
    for mask in 0..1u32 << 12 {
        let arcs = arcs_of(mask);
        let g = graph(&arcs);
        let found = find_euler_tour(&g);
        assert_eq!(found.is_some(), brute_euler(&arcs), "arcs {arcs:?}");
        assert_eq!(found.is_some(), all_cuts_balanced(&arcs) && arcs_connected(&arcs));
        if let Some(w) = found {
            assert!(is_valid_walk(&g, &w, WalkRequirements::EULER_TOUR).ok);
        }
    }
}

#[test]
fn check_euler_matches_cut_balance() {
    for mask in 0..1u32 << 12 {
        let arcs = arcs_of(mask);
        let c = check_euler(&source(&arcs), N).unwrap();
        assert_eq!(c.is_ok(), all_cuts_balanced(&arcs), "arcs {arcs:?}");
        let degrees = (0..N).all(|v| {
            let (f, b) = cut_sizes(&arcs, 1 << v);
            f == b
        });
        assert_eq!(degrees, all_cuts_balanced(&arcs));
    }
}

fn brute_reach(arcs: &[(usize, usize)], from: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([from]);
    loop {
        let before = seen.len();
        for &(a, b) in arcs {
            if seen.contains(&a) {
                seen.insert(b);
            }
        }
        if seen.len() == before {
            return seen;
        }
    }
}

#[test]
fn strong_components_match_mutual_reachability() {
    for mask in (0..1u32 << 12).step_by(7) {
        let arcs = arcs_of(mask);
        let sc = strong_components(&graph(&arcs));
        let reach: Vec<BTreeSet<usize>> = (0..N).map(|v| brute_reach(&arcs, v)).collect();
        for a in 0..N {
            for b in 0..N {
                let same = reach[a].contains(&b) && reach[b].contains(&a);
                let (ca, cb) = (
                    sc.component_of(endspace_core::graph::VertexId(a)),
                    sc.component_of(endspace_core::graph::VertexId(b)),
                );
                assert_eq!(same, ca == cb);
            }
        }
    }
}

#[test]
fn finite_sources_are_solid_and_satisfy_the_laws() {
    for mask in (0..1u32 << 12).step_by(13) {
        let s = source(&arcs_of(mask));
        for x in 0..N {
            let r = solidity_check(&s, &BTreeSet::from([x]), N).unwrap();
            assert_eq!(r.verdict, SolidityVerdict::SolidAtX);
        }
        assert!(verify_system(&s, N).unwrap().passed());
        let chain = QuotientChain::build(&s, N).unwrap();
        assert_eq!(chain.levels[N].class_count(), N);
    }
}
