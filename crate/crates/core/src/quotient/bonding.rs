use super::{level_in_window, QuotientError, QuotientLevel, DEFAULT_EDGE_BOUND};
use crate::graph::{EdgeId, EdgeKind, VertexId};
use crate::sources::Source;
use serde::Serialize;

/// Where an edge of the finer level lands in the coarser one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeImage {
    Edge(EdgeId),
    /// Both ends fall in the same class, so the edge collapses onto it.
    Class(usize),
}

/// The bonding map from level `from` down to level `to <= from`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BondingMap {
    pub from: usize,
    pub to: usize,
    /// Class of the coarser level containing each class of the finer one.
    pub vertex_map: Vec<usize>,
    /// `None` when the coarser level has no edge the rule can pick.
    pub edge_map: Vec<Option<EdgeImage>>,
}

impl BondingMap {
    /// Builds the map between two levels of one chain: classes go to the
    /// class containing their representative, and edges follow the usual
    /// four cases (collapse inside a class, quotient edges to quotient
    /// edges, concrete edges to a quotient edge when the target pair has one
    /// and otherwise to the concrete edge with the same origin).
    pub fn between(fine: &QuotientLevel, coarse: &QuotientLevel) -> Result<BondingMap, QuotientError> {
        if coarse.n > fine.n {
            return Err(QuotientError::LevelOrder {
                from: fine.n,
                to: coarse.n,
            });
        }
        let vertex_map = fine
            .classes
            .iter()
            .map(|c| {
                coarse
                    .class_of_vertex(c.rep)
                    .ok_or_else(|| QuotientError::Internal(format!("class {} outside the window", c.id)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let edge_map = fine
            .graph
            .edges()
            .iter()
            .map(|e| {
                let (p, q) = (vertex_map[e.tail.0], vertex_map[e.head.0]);
                if p == q {
                    return Some(EdgeImage::Class(p));
                }
                let (p, q) = (VertexId(p), VertexId(q));
                if let Some(qe) = coarse.graph.quotient_edge(p, q) {
                    return Some(EdgeImage::Edge(qe));
                }
                if e.kind == EdgeKind::Quotient {
                    return None;
                }
                coarse
                    .graph
                    .out_edges(p)
                    .iter()
                    .copied()
                    .find(|&c| {
                        let ce = coarse.graph.edge(c);
                        ce.head == q && ce.origin == e.origin
                    })
                    .map(EdgeImage::Edge)
            })
            .collect();
        Ok(BondingMap {
            from: fine.n,
            to: coarse.n,
            vertex_map,
            edge_map,
        })
    }

    /// Image of an edge image of the finer map under `self`.
    pub fn apply(&self, image: EdgeImage) -> Option<EdgeImage> {
        match image {
            EdgeImage::Class(c) => Some(EdgeImage::Class(self.vertex_map[c])),
            EdgeImage::Edge(e) => self.edge_map[e.0],
        }
    }
}

/// `bonding(n, m)` built from freshly computed levels sharing one window.
pub fn bonding(s: &dyn Source, n: usize, m: usize) -> Result<BondingMap, QuotientError> {
    if m > n {
        return Err(QuotientError::LevelOrder { from: n, to: m });
    }
    let window = s.window_for(n);
    let fine = level_in_window(s, n, window, DEFAULT_EDGE_BOUND)?;
    let coarse = level_in_window(s, m, window, DEFAULT_EDGE_BOUND)?;
    BondingMap::between(&fine, &coarse)
}
