use super::{certificates, check_euler, effective_depth, Thread, ThreadKind, TourError};
use crate::graph::{euler_backtrack, EdgeId, TourGuide, VertexId, Walk};
use crate::quotient::{EdgeImage, QuotientChain};
use crate::sources::Source;
use std::ops::ControlFlow;

/// Default budget of candidate tours examined by [`lift_euler`].
pub const DEFAULT_TOUR_LIMIT: usize = 10_000;

struct Context<'a> {
    chain: &'a QuotientChain,
    /// `images[n]`: edge of level `n - 1` under each edge of level `n`,
    /// `None` for collapsed edges.
    images: Vec<Vec<Option<EdgeId>>>,
    vertex_maps: Vec<Vec<usize>>,
}

struct State {
    stack: Vec<Walk>,
    best: Vec<Walk>,
    budget: usize,
    found: bool,
}

fn search(cx: &Context, st: &mut State, n: usize, anchors: Vec<VertexId>) -> ControlFlow<()> {
    if n > cx.chain.depth() {
        st.found = true;
        return ControlFlow::Break(());
    }
    let g = &cx.chain.levels[n].graph;
    let expected: Vec<EdgeId> = st.stack.last().map(|w| w.edges().to_vec()).unwrap_or_default();
    let guide = TourGuide {
        image: &cx.images[n],
        expected: &expected,
    };
    for anchor in anchors {
        let _ = euler_backtrack(g, anchor, (n > 0).then_some(&guide), &mut |tour| {
            if st.budget == 0 {
                return ControlFlow::Break(());
            }
            st.budget -= 1;
            let next: Vec<VertexId> = cx
                .vertex_maps
                .get(n + 1)
                .map(|m| (0..m.len()).filter(|&c| m[c] == anchor_of(&tour)).map(VertexId).collect())
                .unwrap_or_default();
            st.stack.push(tour);
            if st.stack.len() > st.best.len() {
                st.best = st.stack.clone();
            }
            let r = search(cx, st, n + 1, next);
            st.stack.pop();
            r
        });
        if st.found || st.budget == 0 {
            return ControlFlow::Break(());
        }
    }
    ControlFlow::Continue(())
}

fn anchor_of(w: &Walk) -> usize {
    w.start().0
}

/// Depth-first search for Euler tours of levels `0..=depth`, each projecting
/// onto the one below it, starting from `anchor` at level 0. Tours are tried
/// in lexicographic order of edge ids and at most `tour_limit` are examined
/// overall. When no full thread is found the deepest prefix is returned with
/// `complete` unset.
pub fn lift_euler(s: &dyn Source, depth: usize, anchor: usize, tour_limit: usize) -> Result<Thread, TourError> {
    let check = check_euler(s, depth)?;
    if let Some(witness) = check.witness {
        return Err(TourError::EulerConditionFailed { witness });
    }
    let chain = QuotientChain::build(s, effective_depth(s, depth))?;
    lift_in_chain(&chain, anchor, tour_limit, check.certainty, depth)
}

pub(crate) fn lift_in_chain(
    chain: &QuotientChain,
    anchor: usize,
    tour_limit: usize,
    certainty: crate::sources::Certainty,
    requested_depth: usize,
) -> Result<Thread, TourError> {
    if anchor >= chain.levels[0].class_count() {
        return Err(TourError::BadAnchor { class: anchor });
    }
    let mut images = vec![Vec::new()];
    let mut vertex_maps = vec![Vec::new()];
    for n in 1..=chain.depth() {
        let b = chain.bonding(n, n - 1)?;
        images.push(
            b.edge_map
                .iter()
                .map(|i| match i {
                    Some(EdgeImage::Edge(e)) => Some(*e),
                    _ => None,
                })
                .collect(),
        );
        vertex_maps.push(b.vertex_map);
    }
    let cx = Context {
        chain,
        images,
        vertex_maps,
    };
    let mut st = State {
        stack: Vec::new(),
        best: Vec::new(),
        budget: tour_limit,
        found: false,
    };
    let _ = search(&cx, &mut st, 0, vec![VertexId(anchor)]);
    let walks = st.best;
    Ok(Thread {
        kind: ThreadKind::EulerTour,
        first_level: 0,
        certificates: certificates(chain, 0, &walks),
        walks,
        complete: st.found,
        requested_depth,
        certainty: certainty.and(chain.certainty()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_valid_walk, WalkRequirements};
    use crate::sources::{Builtin, FiniteSource};
    use crate::tours::verify_thread;

    #[test]
    fn symmetric_ray_lifts_to_depth_eight() {
        let s = Builtin::SymmetricRay;
        let t = lift_euler(&s, 8, 0, DEFAULT_TOUR_LIMIT).unwrap();
        assert!(t.complete);
        assert_eq!(t.walks.len(), 9);
        let chain = QuotientChain::build(&s, 8).unwrap();
        assert!(verify_thread(&chain, &t).ok);
        assert!(t.certificates.iter().all(|c| *c));
    }

    #[test]
    fn zchain_fails_the_condition() {
        assert!(matches!(
            lift_euler(&Builtin::ZChain, 5, 0, DEFAULT_TOUR_LIMIT),
            Err(TourError::EulerConditionFailed { .. })
        ));
    }

    #[test]
    fn finite_eulerian_top_level_is_a_tour_of_the_digraph() {
        let arcs = vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 0)];
        let s = FiniteSource::new("f", (0..4).map(|i| format!("x{i}")).collect(), arcs).unwrap();
        let t = lift_euler(&s, 4, 0, DEFAULT_TOUR_LIMIT).unwrap();
        assert!(t.complete);
        let top = t.walks.last().unwrap();
        let chain = QuotientChain::build(&s, 4).unwrap();
        let g = &chain.levels[4].graph;
        assert_eq!(g.edge_count(), 5);
        assert!(is_valid_walk(g, top, WalkRequirements::EULER_TOUR).ok);
    }

    #[test]
    fn zero_budget_returns_an_empty_prefix() {
        let t = lift_euler(&Builtin::SymmetricRay, 3, 0, 0).unwrap();
        assert!(!t.complete);
        assert!(t.walks.is_empty());
    }

    #[test]
    fn anchor_must_exist() {
        assert!(matches!(
            lift_euler(&Builtin::SymmetricRay, 3, 5, 10),
            Err(TourError::BadAnchor { class: 5 })
        ));
    }
}
