use super::{certificates, effective_depth, Thread, ThreadKind, TourError};
use crate::graph::{closed_spanning_walk, shortest_path, EdgeId, MultiDigraph, VertexId, Walk};
use crate::quotient::{EdgeImage, QuotientChain, QuotientLevel};
use crate::sources::Source;
use std::collections::BTreeSet;

/// Classes `keep` of a level as a graph of their own, with the maps back to
/// level vertex and edge ids.
struct Sub {
    graph: MultiDigraph,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Sub {
    fn new(g: &MultiDigraph, keep: &BTreeSet<VertexId>) -> Sub {
        let (graph, vertices) = g.induced(keep);
        let edges = g
            .edge_ids()
            .filter(|&e| {
                let edge = g.edge(e);
                keep.contains(&edge.tail) && keep.contains(&edge.head)
            })
            .collect();
        Sub { graph, vertices, edges }
    }

    fn local(&self, v: VertexId) -> VertexId {
        VertexId(self.vertices.binary_search(&v).expect("vertex of the subgraph"))
    }

    fn global(&self, w: &Walk) -> Walk {
        let vertices = w.vertices().iter().map(|v| self.vertices[v.0]).collect();
        let edges = w.edges().iter().map(|e| self.edges[e.0]).collect();
        Walk::from_parts(vertices, edges).expect("walk shape is preserved")
    }
}

fn not_connected(level: &QuotientLevel, (a, b): (VertexId, VertexId), s: &dyn Source) -> TourError {
    TourError::NotStronglyConnected {
        level: level.n,
        from: s.label(level.classes[a.0].rep),
        to: s.label(level.classes[b.0].rep),
    }
}

/// Closed walk from `from` through every class of `sub`, continued by a
/// shortest path to `to`.
fn plug(sub: &Sub, from: VertexId, to: VertexId) -> Result<Walk, (VertexId, VertexId)> {
    let map = |(a, b): (VertexId, VertexId)| (sub.vertices[a.0], sub.vertices[b.0]);
    let mut w = closed_spanning_walk(&sub.graph, sub.local(from)).map_err(map)?;
    let path = shortest_path(&sub.graph, w.end(), sub.local(to), |_| true)
        .ok_or((from, to))?;
    w.extend(&path);
    Ok(sub.global(&w))
}

/// `W_n` from `W_{n-1}`: every visit of the class `C` that splits off
/// vertex `n - 1` is replaced by a walk through all classes of `C` at level
/// `n`, between the lowest-id lifts of the edges entering and leaving `C`.
fn refine(chain: &QuotientChain, n: usize, prev: &Walk, s: &dyn Source) -> Result<Walk, TourError> {
    let fine = &chain.levels[n];
    let coarse = &chain.levels[n - 1];
    let b = chain.bonding(n, n - 1)?;
    let c = coarse
        .class_of_vertex(n - 1)
        .ok_or_else(|| TourError::Internal(format!("vertex {} outside the window", n - 1)))?;
    let inner: BTreeSet<VertexId> = (0..fine.class_count())
        .filter(|&k| b.vertex_map[k] == c)
        .map(VertexId)
        .collect();
    let sub = Sub::new(&fine.graph, &inner);
    let fail = |pair| not_connected(fine, pair, s);
    if prev.is_empty() {
        let first = *inner.first().expect("every class has a preimage");
        return plug(&sub, first, first).map_err(fail);
    }
    let mut lift: Vec<Option<EdgeId>> = vec![None; coarse.graph.edge_count()];
    for (f, img) in b.edge_map.iter().enumerate() {
        if let Some(EdgeImage::Edge(e)) = img {
            lift[e.0].get_or_insert(EdgeId(f));
        }
    }
    let lifted = prev
        .edges()
        .iter()
        .map(|e| lift[e.0].ok_or_else(|| TourError::Internal(format!("edge e{} has no lift", e.0))))
        .collect::<Result<Vec<_>, _>>()?;
    let head = |f: EdgeId| fine.graph.edge(f).head;
    let tail = |f: EdgeId| fine.graph.edge(f).tail;
    let p = prev.vertices();
    let start = if p[0].0 == c {
        head(*lifted.last().expect("walk has edges"))
    } else {
        tail(lifted[0])
    };
    let mut w = Walk::trivial(start);
    for (j, &f) in lifted.iter().enumerate() {
        if p[j].0 == c {
            w.extend(&plug(&sub, w.end(), tail(f)).map_err(fail)?);
        }
        if w.end() != tail(f) {
            return Err(TourError::Internal(format!("lift of step {j} does not continue the walk")));
        }
        w.push(f, head(f));
    }
    Ok(w)
}

/// Closed walks `W_1, ..., W_depth` through all classes of their levels,
/// each refining the previous one. Every level is first checked for strong
/// connectivity; the first failure is reported with a pair of class
/// representatives that have no path between them.
pub fn span_walk(s: &dyn Source, depth: usize) -> Result<Thread, TourError> {
    let depth = effective_depth(s, depth);
    if depth < 1 {
        return Err(TourError::DepthTooSmall { min: 1 });
    }
    let chain = QuotientChain::build(s, depth)?;
    let mut first = None;
    for level in &chain.levels {
        let w = closed_spanning_walk(&level.graph, VertexId(0)).map_err(|p| not_connected(level, p, s))?;
        if level.n == 1 {
            first = Some(w);
        }
    }
    let mut walks = vec![first.expect("depth is at least one")];
    for n in 2..=depth {
        let next = refine(&chain, n, walks.last().expect("non-empty"), s)?;
        walks.push(next);
    }
    Ok(Thread {
        kind: ThreadKind::SpanningWalk,
        first_level: 1,
        certificates: certificates(&chain, 1, &walks),
        walks,
        complete: true,
        requested_depth: depth,
        certainty: chain.certainty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_valid_walk, WalkRequirements};
    use crate::sources::{Builtin, FiniteSource};
    use crate::tours::{project_walk, verify_thread, ThreadViolation};

    #[test]
    fn symmetric_ray_thread_is_consistent() {
        let s = Builtin::SymmetricRay;
        let t = span_walk(&s, 8).unwrap();
        assert_eq!(t.walks.len(), 8);
        let chain = QuotientChain::build(&s, 8).unwrap();
        assert!(verify_thread(&chain, &t).ok);
        let b = chain.bonding(3, 2).unwrap();
        assert_eq!(project_walk(&b, &t.walks[2]).unwrap(), t.walks[1]);
    }

    #[test]
    fn twin_rays_are_not_strongly_connected() {
        let e = span_walk(&Builtin::TwinRays, 3).unwrap_err();
        assert_eq!(
            e,
            TourError::NotStronglyConnected {
                level: 0,
                from: "b0".into(),
                to: "a0".into()
            }
        );
    }

    #[test]
    fn finite_strongly_connected_source() {
        let arcs = vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 1)];
        let s = FiniteSource::new("f", (0..4).map(|i| format!("x{i}")).collect(), arcs).unwrap();
        let t = span_walk(&s, 10).unwrap();
        assert_eq!(t.last_level(), 4);
        let chain = QuotientChain::build(&s, 4).unwrap();
        let top = &chain.levels[4].graph;
        assert!(is_valid_walk(top, t.walks.last().unwrap(), WalkRequirements::CLOSED_SPANNING).ok);
        assert!(verify_thread(&chain, &t).ok);
    }

    #[test]
    fn necklace_thread_is_consistent() {
        let s = Builtin::Necklace(3);
        let t = span_walk(&s, 7).unwrap();
        let chain = QuotientChain::build(&s, 7).unwrap();
        assert!(verify_thread(&chain, &t).ok);
    }

    #[test]
    fn non_spanning_level_is_caught() {
        let s = Builtin::SymmetricRay;
        let mut t = span_walk(&s, 4).unwrap();
        let chain = QuotientChain::build(&s, 4).unwrap();
        t.walks[1] = Walk::trivial(t.walks[1].start());
        let v = verify_thread(&chain, &t);
        assert!(matches!(
            v.violation,
            Some(ThreadViolation::Walk { level: 2, .. })
        ));
    }
}
