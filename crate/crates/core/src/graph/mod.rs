//! Finite multi-digraph kernel.
//!
//! Every finite object in the crate lives here: truncations of sources,
//! quotient levels and the walks drawn on them. Vertices are addressed by
//! their position in the vertex list, which doubles as the canonical total
//! order used for tie-breaking in every search.

mod euler;
mod scc;
mod walk;

pub use euler::{enumerate_euler_tours, find_euler_tour, find_euler_tour_from, EulerTours};
pub(crate) use euler::{euler_backtrack, TourGuide};
pub use scc::{condensation, strong_components, StrongComponents};
pub use walk::{
    closed_spanning_walk, is_valid_walk, shortest_path, Walk, WalkRequirements, WalkVerdict,
    WalkViolation,
};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Concrete,
    /// Stands in for an infinite bundle of edges between two classes.
    Quotient,
}

/// An edge of a source digraph, addressed by the enumeration indices of its
/// endpoints. `copy` distinguishes parallel edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceEdge {
    pub tail: usize,
    pub head: usize,
    pub copy: u32,
}

impl SourceEdge {
    pub fn new(tail: usize, head: usize) -> Self {
        SourceEdge { tail, head, copy: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub kind: EdgeKind,
    pub origin: Option<SourceEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("loop at vertex {0:?}")]
    Loop(String),
    #[error("second quotient edge from {0:?} to {1:?}")]
    DuplicateQuotient(String, String),
    #[error("cut side is empty")]
    EmptySide,
}

/// Finite multi-digraph with labelled vertices.
///
/// Parallel edges are allowed; loops are not. At most one quotient edge
/// exists per ordered vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDigraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl MultiDigraph {
    pub fn new<I, S>(labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(GraphError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        Ok(MultiDigraph {
            labels,
            edges: Vec::new(),
            out_edges: vec![Vec::new(); n],
            in_edges: vec![Vec::new(); n],
        })
    }

    /// Unlabelled graph on `n` vertices named `0..n`.
    pub fn with_order(n: usize) -> Self {
        MultiDigraph::new((0..n).map(|i| i.to_string())).expect("labels are distinct")
    }

    pub fn add_edge(
        &mut self,
        tail: VertexId,
        head: VertexId,
        kind: EdgeKind,
        origin: Option<SourceEdge>,
    ) -> Result<EdgeId, GraphError> {
        let n = self.labels.len();
        for v in [tail, head] {
            if v.0 >= n {
                return Err(GraphError::UnknownVertex(v.0));
            }
        }
        if tail == head {
            return Err(GraphError::Loop(self.labels[tail.0].clone()));
        }
        if kind == EdgeKind::Quotient
            && self.out_edges[tail.0]
                .iter()
                .any(|&e| self.edges[e.0].head == head && self.edges[e.0].kind == EdgeKind::Quotient)
        {
            return Err(GraphError::DuplicateQuotient(
                self.labels[tail.0].clone(),
                self.labels[head.0].clone(),
            ));
        }
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge { tail, head, kind, origin });
        self.out_edges[tail.0].push(id);
        self.in_edges[head.0].push(id);
        Ok(id)
    }

    /// Shorthand for a concrete edge without origin.
    pub fn add_arc(&mut self, tail: usize, head: usize) -> Result<EdgeId, GraphError> {
        self.add_edge(VertexId(tail), VertexId(head), EdgeKind::Concrete, None)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn get_edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(e.0)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label).map(VertexId)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.labels.len()
    }

    /// Outgoing edges in increasing id order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v.0]
    }

    /// Incoming edges in increasing id order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v.0]
    }

    pub fn quotient_edge(&self, tail: VertexId, head: VertexId) -> Option<EdgeId> {
        self.out_edges[tail.0]
            .iter()
            .copied()
            .find(|&e| self.edges[e.0].head == head && self.edges[e.0].kind == EdgeKind::Quotient)
    }

    /// Subgraph induced by `keep`, vertices renumbered in their original order.
    /// Returns the subgraph and the map from new to old vertex ids.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> (MultiDigraph, Vec<VertexId>) {
        let old: Vec<VertexId> = keep.iter().copied().filter(|v| self.contains(*v)).collect();
        let mut new_of = vec![None; self.vertex_count()];
        for (i, v) in old.iter().enumerate() {
            new_of[v.0] = Some(i);
        }
        let mut g = MultiDigraph::new(old.iter().map(|v| self.labels[v.0].clone()))
            .expect("labels of a valid graph are distinct");
        for e in &self.edges {
            if let (Some(t), Some(h)) = (new_of[e.tail.0], new_of[e.head.0]) {
                g.add_edge(VertexId(t), VertexId(h), e.kind, e.origin)
                    .expect("induced edges are valid");
            }
        }
        (g, old)
    }

    /// Vertices reachable from `start` along directed edges.
    pub fn reachable_from(&self, start: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut stack = vec![start];
        seen[start.0] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.out_edges[v.0] {
                let h = self.edges[e.0].head;
                if !seen[h.0] {
                    seen[h.0] = true;
                    stack.push(h);
                }
            }
        }
        seen
    }
}

/// An ordered bipartition of the vertex set with its crossing counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub side1: BTreeSet<VertexId>,
    pub side2: BTreeSet<VertexId>,
    pub forward_size: usize,
    pub backward_size: usize,
}

impl Cut {
    pub fn is_balanced(&self) -> bool {
        self.forward_size == self.backward_size
    }
}

pub fn cut_sizes(g: &MultiDigraph, side1: &BTreeSet<VertexId>) -> Result<Cut, GraphError> {
    if let Some(v) = side1.iter().find(|v| !g.contains(**v)) {
        return Err(GraphError::UnknownVertex(v.0));
    }
    let side2: BTreeSet<VertexId> = g.vertices().filter(|v| !side1.contains(v)).collect();
    if side1.is_empty() || side2.is_empty() {
        return Err(GraphError::EmptySide);
    }
    let mut forward = 0;
    let mut backward = 0;
    for e in g.edges() {
        match (side1.contains(&e.tail), side1.contains(&e.head)) {
            (true, false) => forward += 1,
            (false, true) => backward += 1,
            _ => {}
        }
    }
    Ok(Cut {
        side1: side1.clone(),
        side2,
        forward_size: forward,
        backward_size: backward,
    })
}

/// `(in-degree, out-degree)` counting parallel edges.
pub fn vertex_degrees(g: &MultiDigraph, v: VertexId) -> Result<(usize, usize), GraphError> {
    if !g.contains(v) {
        return Err(GraphError::UnknownVertex(v.0));
    }
    Ok((g.in_edges(v).len(), g.out_edges(v).len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle3() -> MultiDigraph {
        let mut g = MultiDigraph::new(["a", "b", "c"]).unwrap();
        g.add_arc(0, 1).unwrap();
        g.add_arc(1, 2).unwrap();
        g.add_arc(2, 0).unwrap();
        g
    }

    #[test]
    fn loops_are_rejected() {
        let mut g = MultiDigraph::with_order(2);
        assert!(matches!(g.add_arc(1, 1), Err(GraphError::Loop(_))));
    }

    #[test]
    fn one_quotient_edge_per_pair() {
        let mut g = MultiDigraph::with_order(2);
        g.add_edge(VertexId(0), VertexId(1), EdgeKind::Quotient, None).unwrap();
        g.add_arc(0, 1).unwrap();
        assert!(g.add_edge(VertexId(0), VertexId(1), EdgeKind::Quotient, None).is_err());
        assert!(g.add_edge(VertexId(1), VertexId(0), EdgeKind::Quotient, None).is_ok());
    }

    #[test]
    fn degrees() {
        let g = cycle3();
        for v in g.vertices() {
            assert_eq!(vertex_degrees(&g, v).unwrap(), (1, 1));
        }
        let mut d = MultiDigraph::new(["a", "b"]).unwrap();
        d.add_arc(0, 1).unwrap();
        d.add_arc(0, 1).unwrap();
        assert_eq!(vertex_degrees(&d, VertexId(0)).unwrap(), (0, 2));
        assert_eq!(vertex_degrees(&d, VertexId(7)), Err(GraphError::UnknownVertex(7)));
    }

    #[test]
    fn cut_errors_on_empty_side() {
        let g = cycle3();
        assert_eq!(cut_sizes(&g, &BTreeSet::new()), Err(GraphError::EmptySide));
        let all: BTreeSet<_> = g.vertices().collect();
        assert_eq!(cut_sizes(&g, &all), Err(GraphError::EmptySide));
    }

    #[test]
    fn cut_counts_quotient_edges_once() {
        let mut g = MultiDigraph::with_order(2);
        g.add_edge(VertexId(0), VertexId(1), EdgeKind::Quotient, None).unwrap();
        g.add_arc(0, 1).unwrap();
        let cut = cut_sizes(&g, &[VertexId(0)].into()).unwrap();
        assert_eq!((cut.forward_size, cut.backward_size), (2, 0));
    }

    #[test]
    fn induced_subgraph_keeps_order() {
        let g = cycle3();
        let (h, map) = g.induced(&[VertexId(0), VertexId(1)].into());
        assert_eq!(h.labels(), &["a".to_string(), "b".to_string()]);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(map, vec![VertexId(0), VertexId(1)]);
    }
}
