use super::{EdgeId, MultiDigraph, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};

/// A directed walk `v0 e1 v1 e2 ... ek vk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Walk {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Walk {
    /// The empty walk sitting at `v`.
    pub fn trivial(v: VertexId) -> Self {
        Walk {
            vertices: vec![v],
            edges: Vec::new(),
        }
    }

    /// Builds a walk from its alternating parts; `vertices.len()` must be
    /// `edges.len() + 1`.
    pub fn from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Option<Self> {
        (vertices.len() == edges.len() + 1).then_some(Walk { vertices, edges })
    }

    /// Reconstructs the walk from a start vertex and an edge sequence.
    pub fn from_edges(g: &MultiDigraph, start: VertexId, edges: &[EdgeId]) -> Self {
        let mut w = Walk::trivial(start);
        for &e in edges {
            w.push(e, g.edge(e).head);
        }
        w
    }

    pub fn push(&mut self, e: EdgeId, to: VertexId) {
        self.edges.push(e);
        self.vertices.push(to);
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn extend(&mut self, other: &Walk) {
        debug_assert_eq!(self.end(), other.start());
        self.edges.extend_from_slice(&other.edges);
        self.vertices.extend_from_slice(&other.vertices[1..]);
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("walks are non-empty")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WalkRequirements {
    pub closed: bool,
    pub spanning: bool,
    pub eulerian: bool,
}

impl WalkRequirements {
    pub const ALL: WalkRequirements = WalkRequirements {
        closed: true,
        spanning: true,
        eulerian: true,
    };
    pub const CLOSED_SPANNING: WalkRequirements = WalkRequirements {
        closed: true,
        spanning: true,
        eulerian: false,
    };
    pub const EULER_TOUR: WalkRequirements = WalkRequirements {
        closed: true,
        spanning: false,
        eulerian: true,
    };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WalkViolation {
    UnknownVertex { index: usize },
    UnknownEdge { index: usize },
    /// Edge at `index` does not run from the vertex before it to the one after.
    BadStep { index: usize },
    NotClosed,
    NotSpanning { vertex: usize },
    RepeatedEdge { index: usize },
    MissingEdge { edge: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkVerdict {
    pub ok: bool,
    pub violation: Option<WalkViolation>,
}

impl WalkVerdict {
    fn fail(v: WalkViolation) -> Self {
        WalkVerdict {
            ok: false,
            violation: Some(v),
        }
    }
}

pub fn is_valid_walk(g: &MultiDigraph, w: &Walk, req: WalkRequirements) -> WalkVerdict {
    for (i, v) in w.vertices.iter().enumerate() {
        if !g.contains(*v) {
            return WalkVerdict::fail(WalkViolation::UnknownVertex { index: i });
        }
    }
    for (i, e) in w.edges.iter().enumerate() {
        let Some(edge) = g.get_edge(*e) else {
            return WalkVerdict::fail(WalkViolation::UnknownEdge { index: i });
        };
        if edge.tail != w.vertices[i] || edge.head != w.vertices[i + 1] {
            return WalkVerdict::fail(WalkViolation::BadStep { index: i });
        }
    }
    if req.closed && !w.is_closed() {
        return WalkVerdict::fail(WalkViolation::NotClosed);
    }
    if req.spanning {
        let seen: HashSet<VertexId> = w.vertices.iter().copied().collect();
        if let Some(v) = g.vertices().find(|v| !seen.contains(v)) {
            return WalkVerdict::fail(WalkViolation::NotSpanning { vertex: v.0 });
        }
    }
    if req.eulerian {
        let mut used = vec![false; g.edge_count()];
        for (i, e) in w.edges.iter().enumerate() {
            if std::mem::replace(&mut used[e.0], true) {
                return WalkVerdict::fail(WalkViolation::RepeatedEdge { index: i });
            }
        }
        if let Some(e) = used.iter().position(|u| !u) {
            return WalkVerdict::fail(WalkViolation::MissingEdge { edge: e });
        }
    }
    WalkVerdict {
        ok: true,
        violation: None,
    }
}

/// Shortest directed path by breadth-first search, exploring out-edges in id
/// order. `allowed` restricts the vertices the path may use (endpoints
/// included).
pub fn shortest_path(
    g: &MultiDigraph,
    from: VertexId,
    to: VertexId,
    allowed: impl Fn(VertexId) -> bool,
) -> Option<Walk> {
    if from == to {
        return Some(Walk::trivial(from));
    }
    let mut parent: Vec<Option<EdgeId>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from.0] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &e in g.out_edges(v) {
            let h = g.edge(e).head;
            if seen[h.0] || !allowed(h) {
                continue;
            }
            seen[h.0] = true;
            parent[h.0] = Some(e);
            if h == to {
                let mut edges = Vec::new();
                let mut cur = to;
                while let Some(pe) = parent[cur.0] {
                    edges.push(pe);
                    cur = g.edge(pe).tail;
                    if cur == from {
                        break;
                    }
                }
                edges.reverse();
                return Some(Walk::from_edges(g, from, &edges));
            }
            queue.push_back(h);
        }
    }
    None
}

/// Closed walk from `anchor` through every vertex: vertices are visited in
/// id order by shortest paths, then the walk returns to `anchor`.
///
/// On failure returns the ordered pair `(v, w)` with no `v -> w` path.
pub fn closed_spanning_walk(
    g: &MultiDigraph,
    anchor: VertexId,
) -> Result<Walk, (VertexId, VertexId)> {
    let mut walk = Walk::trivial(anchor);
    let mut visited = vec![false; g.vertex_count()];
    visited[anchor.0] = true;
    for target in g.vertices() {
        if visited[target.0] {
            continue;
        }
        let cur = walk.end();
        let path = shortest_path(g, cur, target, |_| true).ok_or((cur, target))?;
        for v in path.vertices() {
            visited[v.0] = true;
        }
        walk.extend(&path);
    }
    let cur = walk.end();
    let back = shortest_path(g, cur, anchor, |_| true).ok_or((cur, anchor))?;
    walk.extend(&back);
    Ok(walk)
}
