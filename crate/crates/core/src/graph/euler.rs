use super::{EdgeId, MultiDigraph, VertexId, Walk};
use std::ops::ControlFlow;

/// Constrains a tour search so that the tour projects onto a given walk:
/// every edge whose image is `Some(x)` must be traversed exactly when `x` is
/// the next expected edge, edges with image `None` collapse and are free.
pub(crate) struct TourGuide<'a> {
    pub image: &'a [Option<EdgeId>],
    pub expected: &'a [EdgeId],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTours {
    /// Tours in lexicographic order of their edge-id sequences.
    pub tours: Vec<Walk>,
    /// Set when the search stopped at `limit` with tours left unlisted.
    pub overflow: bool,
}

fn balanced(g: &MultiDigraph) -> bool {
    g.vertices()
        .all(|v| g.in_edges(v).len() == g.out_edges(v).len())
}

/// Euler tour starting at the smallest vertex with an outgoing edge, or the
/// empty walk at vertex 0 when `g` has no edges.
pub fn find_euler_tour(g: &MultiDigraph) -> Option<Walk> {
    let anchor = g
        .vertices()
        .find(|&v| !g.out_edges(v).is_empty())
        .or_else(|| g.vertices().next())?;
    find_euler_tour_from(g, anchor)
}

/// Hierholzer's cycle splicing, always leaving a vertex by its lowest unused
/// edge id.
pub fn find_euler_tour_from(g: &MultiDigraph, anchor: VertexId) -> Option<Walk> {
    if !g.contains(anchor) || !balanced(g) {
        return None;
    }
    if g.edge_count() == 0 {
        return Some(Walk::trivial(anchor));
    }
    let mut next = vec![0usize; g.vertex_count()];
    let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(anchor, None)];
    let mut circuit: Vec<(VertexId, Option<EdgeId>)> = Vec::with_capacity(g.edge_count() + 1);
    while let Some(&(v, _)) = stack.last() {
        let outs = g.out_edges(v);
        if next[v.0] < outs.len() {
            let e = outs[next[v.0]];
            next[v.0] += 1;
            stack.push((g.edge(e).head, Some(e)));
        } else {
            circuit.push(stack.pop().expect("stack is non-empty"));
        }
    }
    if circuit.len() != g.edge_count() + 1 {
        return None;
    }
    circuit.reverse();
    let edges: Vec<EdgeId> = circuit.iter().filter_map(|(_, e)| *e).collect();
    Some(Walk::from_edges(g, anchor, &edges))
}

/// All Euler tours from `anchor`, in canonical order, up to `limit`.
pub fn enumerate_euler_tours(g: &MultiDigraph, anchor: VertexId, limit: usize) -> EulerTours {
    let mut tours = Vec::new();
    let mut overflow = false;
    let _ = euler_backtrack(g, anchor, None, &mut |w| {
        if tours.len() == limit {
            overflow = true;
            return ControlFlow::Break(());
        }
        tours.push(w);
        ControlFlow::Continue(())
    });
    EulerTours { tours, overflow }
}

/// Depth-first enumeration of Euler tours from `anchor` in lexicographic
/// order of edge ids. Branches that can no longer reach every unused edge are
/// cut, so every leaf of the search is a tour.
pub(crate) fn euler_backtrack(
    g: &MultiDigraph,
    anchor: VertexId,
    guide: Option<&TourGuide<'_>>,
    emit: &mut dyn FnMut(Walk) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if !g.contains(anchor) || !balanced(g) {
        return ControlFlow::Continue(());
    }
    if let Some(guide) = guide {
        let mapped = guide.image.iter().filter(|i| i.is_some()).count();
        if mapped != guide.expected.len() {
            return ControlFlow::Continue(());
        }
    }
    let mut search = Search {
        g,
        anchor,
        guide,
        used: vec![false; g.edge_count()],
        path: Vec::with_capacity(g.edge_count()),
        pos: 0,
    };
    if !search.unused_reachable_from(anchor) {
        return ControlFlow::Continue(());
    }
    search.step(anchor, emit)
}

struct Search<'a, 'b> {
    g: &'a MultiDigraph,
    anchor: VertexId,
    guide: Option<&'a TourGuide<'b>>,
    used: Vec<bool>,
    path: Vec<EdgeId>,
    pos: usize,
}

impl Search<'_, '_> {
    fn step(&mut self, v: VertexId, emit: &mut dyn FnMut(Walk) -> ControlFlow<()>) -> ControlFlow<()> {
        if self.path.len() == self.g.edge_count() {
            if v == self.anchor {
                return emit(Walk::from_edges(self.g, self.anchor, &self.path));
            }
            return ControlFlow::Continue(());
        }
        let g = self.g;
        for &e in g.out_edges(v) {
            if self.used[e.0] {
                continue;
            }
            let advances = match self.guide {
                Some(guide) => match guide.image[e.0] {
                    None => false,
                    Some(target) => {
                        if guide.expected.get(self.pos) != Some(&target) {
                            continue;
                        }
                        true
                    }
                },
                None => false,
            };
            self.used[e.0] = true;
            self.path.push(e);
            if advances {
                self.pos += 1;
            }
            let head = g.edge(e).head;
            if self.unused_reachable_from(head) {
                self.step(head, emit)?;
            }
            if advances {
                self.pos -= 1;
            }
            self.path.pop();
            self.used[e.0] = false;
        }
        ControlFlow::Continue(())
    }

    /// Every unused edge has its tail reachable from `v` through unused edges.
    fn unused_reachable_from(&self, v: VertexId) -> bool {
        let g = self.g;
        let mut seen = vec![false; g.vertex_count()];
        seen[v.0] = true;
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            for &e in g.out_edges(x) {
                if self.used[e.0] {
                    continue;
                }
                let h = g.edge(e).head;
                if !seen[h.0] {
                    seen[h.0] = true;
                    stack.push(h);
                }
            }
        }
        g.edge_ids()
            .all(|e| self.used[e.0] || seen[g.edge(e).tail.0])
    }
}
