//! Ends and limit edges read off the quotient chain.
//!
//! An end is followed as a nested sequence of infinite strong components,
//! one per level; a limit edge as a sequence of bundles (or, where its two
//! ends are not yet separated, the component holding both).

mod necklace;
mod rank;

pub use necklace::{
    necklace_search, verify_necklace, Direction, NecklaceCheck, NecklacePrefix, NecklaceViolation,
};
pub use rank::{rank_search, verify_rank_witness, ComponentRank, RankOutcome, RankReason, RankResult, RankWitness};

use crate::graph::{EdgeKind, VertexId};
use crate::quotient::{ClassKind, QuotientChain, QuotientError, QuotientLevel};
use crate::sources::{Cardinality, Certainty, Source, SourceError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndspaceError {
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("level {requested} is deeper than the computed depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },
    #[error("no end with index {0}")]
    NoSuchEnd(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    /// Class index in its level.
    pub class: usize,
    pub id: String,
    pub size: Cardinality,
    /// Class index of the enclosing component one level up.
    pub parent: Option<usize>,
}

/// Strong components of `D - X_n` for every level, linked to the component
/// of the previous level that contains them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentTree {
    pub levels: Vec<Vec<TreeNode>>,
}

impl ComponentTree {
    pub fn from_chain(chain: &QuotientChain) -> Result<ComponentTree, QuotientError> {
        let mut levels = Vec::with_capacity(chain.levels.len());
        for (n, level) in chain.levels.iter().enumerate() {
            let up = if n == 0 {
                None
            } else {
                Some(chain.bonding(n, n - 1)?)
            };
            let nodes = level
                .classes
                .iter()
                .enumerate()
                .filter_map(|(i, c)| match c.kind {
                    ClassKind::Component { size, .. } => Some(TreeNode {
                        class: i,
                        id: c.id.clone(),
                        size,
                        parent: up.as_ref().map(|b| b.vertex_map[i]),
                    }),
                    ClassKind::Singleton { .. } => None,
                })
                .collect();
            levels.push(nodes);
        }
        Ok(ComponentTree { levels })
    }
}

pub fn component_tree(s: &dyn Source, depth: usize) -> Result<ComponentTree, EndspaceError> {
    let chain = QuotientChain::build(s, depth)?;
    Ok(ComponentTree::from_chain(&chain)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreadKind {
    VertexDirection,
    EdgeDirection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LevelRef {
    Component {
        class: usize,
        id: String,
    },
    Bundle {
        tail: usize,
        head: usize,
        tail_id: String,
        head_id: String,
    },
}

/// The two ends of a limit edge; at least one side is an end, so a limit
/// edge between two vertices cannot be expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LimitEdgeEnds {
    EndToEnd { from: usize, to: usize },
    VertexToEnd { vertex: usize, end: usize },
    EndToVertex { end: usize, vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionThread {
    pub kind: ThreadKind,
    /// Assignment for levels `0..=depth`.
    pub levels: Vec<LevelRef>,
    pub certainty: Certainty,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ends: Option<LimitEdgeEnds>,
}

impl DirectionThread {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Class pair of the assignment at level `n`; a component counts as the
    /// pair `(c, c)`.
    fn pair(&self, n: usize) -> (usize, usize) {
        match self.levels[n] {
            LevelRef::Component { class, .. } => (class, class),
            LevelRef::Bundle { tail, head, .. } => (tail, head),
        }
    }
}

/// Whether every level's assignment is carried into every coarser level's
/// assignment by the bonding maps.
pub fn thread_is_nested(chain: &QuotientChain, t: &DirectionThread) -> Result<bool, QuotientError> {
    for n in 0..t.levels.len() {
        let (p, q) = t.pair(n);
        for m in 0..n {
            let f = chain.bonding(n, m)?;
            if (f.vertex_map[p], f.vertex_map[q]) != t.pair(m) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Everything the chain up to `depth` says about ends and limit edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndSpace {
    pub chain: QuotientChain,
    pub tree: ComponentTree,
    pub ends: Vec<DirectionThread>,
    pub limit_edges: Vec<DirectionThread>,
    /// Number of infinite components at each level.
    pub ends_per_level: Vec<usize>,
    pub certainty: Certainty,
}

/// A point of the end space followed through the levels: a vertex of the
/// top separator or an end.
#[derive(Clone, Copy)]
enum Point {
    Vertex(usize),
    End(usize),
}

fn component_ref(level: &QuotientLevel, class: usize) -> LevelRef {
    LevelRef::Component {
        class,
        id: level.classes[class].id.clone(),
    }
}

impl EndSpace {
    pub fn compute(s: &dyn Source, depth: usize) -> Result<EndSpace, EndspaceError> {
        let chain = QuotientChain::build(s, depth)?;
        let tree = ComponentTree::from_chain(&chain)?;
        let certainty = chain.certainty();
        let ends_per_level = tree
            .levels
            .iter()
            .map(|l| l.iter().filter(|c| c.size == Cardinality::Infinite).count())
            .collect();

        let mut ends = Vec::new();
        for node in tree.levels[depth].iter().filter(|c| c.size == Cardinality::Infinite) {
            let mut classes = vec![node.class];
            for n in (1..=depth).rev() {
                let here = classes[classes.len() - 1];
                let parent = tree.levels[n]
                    .iter()
                    .find(|c| c.class == here)
                    .and_then(|c| c.parent)
                    .ok_or_else(|| QuotientError::Internal(format!("class {here} has no parent")))?;
                classes.push(parent);
            }
            classes.reverse();
            ends.push(DirectionThread {
                kind: ThreadKind::VertexDirection,
                levels: classes
                    .iter()
                    .enumerate()
                    .map(|(n, &c)| component_ref(&chain.levels[n], c))
                    .collect(),
                certainty,
                ends: None,
            });
        }

        let mut space = EndSpace {
            chain,
            tree,
            ends,
            limit_edges: Vec::new(),
            ends_per_level,
            certainty,
        };
        space.limit_edges = space.find_limit_edges();
        Ok(space)
    }

    pub fn depth(&self) -> usize {
        self.chain.depth()
    }

    fn class_at(&self, p: Point, n: usize) -> usize {
        match p {
            Point::End(i) => self.ends[i].pair(n).0,
            Point::Vertex(v) => self.chain.levels[n].class_of[v],
        }
    }

    /// The pair `(a, b)` carries a limit edge when at every level where
    /// their classes differ the level has a quotient edge between them.
    /// A finite bundle is used up by a deeper separator, so infinitely many
    /// edges at every level is the right test.
    fn limit_thread(&self, a: Point, b: Point) -> Option<Vec<LevelRef>> {
        let mut levels = Vec::with_capacity(self.chain.levels.len());
        for (n, level) in self.chain.levels.iter().enumerate() {
            let (p, q) = (self.class_at(a, n), self.class_at(b, n));
            if p == q {
                levels.push(component_ref(level, p));
                continue;
            }
            level.graph.quotient_edge(VertexId(p), VertexId(q))?;
            levels.push(LevelRef::Bundle {
                tail: p,
                head: q,
                tail_id: level.classes[p].id.clone(),
                head_id: level.classes[q].id.clone(),
            });
        }
        Some(levels)
    }

    fn find_limit_edges(&self) -> Vec<DirectionThread> {
        let top = self.depth();
        let mut candidates = Vec::new();
        for i in 0..self.ends.len() {
            for j in 0..self.ends.len() {
                if i != j {
                    candidates.push((Point::End(i), Point::End(j), LimitEdgeEnds::EndToEnd { from: i, to: j }));
                }
            }
        }
        for v in 0..top {
            for e in 0..self.ends.len() {
                candidates.push((Point::Vertex(v), Point::End(e), LimitEdgeEnds::VertexToEnd { vertex: v, end: e }));
                candidates.push((Point::End(e), Point::Vertex(v), LimitEdgeEnds::EndToVertex { end: e, vertex: v }));
            }
        }
        candidates
            .into_iter()
            .filter_map(|(a, b, ends)| {
                self.limit_thread(a, b).map(|levels| DirectionThread {
                    kind: ThreadKind::EdgeDirection,
                    levels,
                    certainty: self.certainty,
                    ends: Some(ends),
                })
            })
            .collect()
    }

    /// The basic open set around end `end` at level `n`.
    pub fn basic_open(&self, end: usize, n: usize) -> Result<BasicOpen, EndspaceError> {
        if n > self.depth() {
            return Err(EndspaceError::DepthExceeded {
                requested: n,
                depth: self.depth(),
            });
        }
        let thread = self.ends.get(end).ok_or(EndspaceError::NoSuchEnd(end))?;
        let level = &self.chain.levels[n];
        let class = thread.pair(n).0;
        let size = match level.classes[class].kind {
            ClassKind::Component { size, .. } => size,
            ClassKind::Singleton { .. } => Cardinality::Finite(1),
        };
        let members = level
            .class_of
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(v, _)| v)
            .collect();
        let ends = (0..self.ends.len())
            .filter(|&i| self.ends[i].pair(n).0 == class)
            .collect();
        let limit_edges = (0..self.limit_edges.len())
            .filter(|&i| self.limit_edges[i].pair(n) == (class, class))
            .collect();
        let boundary = level
            .graph
            .edges()
            .iter()
            .filter(|e| e.tail.0 == class || e.head.0 == class)
            .map(|e| BoundaryEdge {
                tail: level.classes[e.tail.0].id.clone(),
                head: level.classes[e.head.0].id.clone(),
                kind: e.kind,
            })
            .collect();
        Ok(BasicOpen {
            level: n,
            class: level.classes[class].id.clone(),
            size,
            members,
            ends,
            limit_edges,
            boundary,
            certainty: level.certainty,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryEdge {
    pub tail: String,
    pub head: String,
    pub kind: EdgeKind,
}

/// A basic open neighbourhood of an end, described combinatorially: the
/// component it lives in at one level, the ends and limit edges living in
/// that component, and the level edges leaving or entering it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicOpen {
    pub level: usize,
    pub class: String,
    pub size: Cardinality,
    /// Enumeration indices of the members inside the window.
    pub members: Vec<usize>,
    pub ends: Vec<usize>,
    pub limit_edges: Vec<usize>,
    pub boundary: Vec<BoundaryEdge>,
    pub certainty: Certainty,
}

pub fn end_threads(s: &dyn Source, depth: usize) -> Result<Vec<DirectionThread>, EndspaceError> {
    Ok(EndSpace::compute(s, depth)?.ends)
}

pub fn limit_edge_threads(s: &dyn Source, depth: usize) -> Result<Vec<DirectionThread>, EndspaceError> {
    Ok(EndSpace::compute(s, depth)?.limit_edges)
}

pub fn basic_open(space: &EndSpace, end: usize, n: usize) -> Result<BasicOpen, EndspaceError> {
    space.basic_open(end, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::{parse_source, Builtin};

    #[test]
    fn symmetric_ray_has_one_chain() {
        let tree = component_tree(&Builtin::SymmetricRay, 5).unwrap();
        assert!(tree.levels.iter().all(|l| l.len() == 1 && l[0].size == Cardinality::Infinite));
    }

    #[test]
    fn twin_rays_has_two_chains() {
        let tree = component_tree(&Builtin::TwinRays, 5).unwrap();
        for l in &tree.levels {
            assert_eq!(l.iter().filter(|c| c.size == Cardinality::Infinite).count(), 2);
        }
    }

    #[test]
    fn finite_tree_dies_out() {
        let s = parse_source("source finite\nedge a b\nedge b a\nedge b c\n").unwrap();
        let tree = component_tree(s.as_ref(), 3).unwrap();
        assert!(tree.levels[3].is_empty());
        assert!(tree.levels.iter().flatten().all(|c| c.size.is_finite()));
    }

    #[test]
    fn end_and_limit_edge_counts() {
        let cases = [
            (Builtin::SymmetricRay, 1, 0),
            (Builtin::TwinRays, 2, 1),
            (Builtin::DominatedRay, 1, 1),
            (Builtin::Necklace(3), 1, 0),
        ];
        for (b, e, l) in cases {
            let space = EndSpace::compute(&b, 10).unwrap();
            assert_eq!(space.ends.len(), e, "{}", b.name());
            assert_eq!(space.limit_edges.len(), l, "{}", b.name());
            for t in space.ends.iter().chain(&space.limit_edges) {
                assert!(thread_is_nested(&space.chain, t).unwrap());
            }
        }
    }

    #[test]
    fn twin_limit_edge_runs_from_a_to_b() {
        let space = EndSpace::compute(&Builtin::TwinRays, 6).unwrap();
        assert_eq!(space.limit_edges[0].ends, Some(LimitEdgeEnds::EndToEnd { from: 0, to: 1 }));
        assert_eq!(space.chain.levels[6].classes[space.ends[0].pair(6).0].rep % 2, 0);
    }

    #[test]
    fn dominated_limit_edge_starts_at_w() {
        let space = EndSpace::compute(&Builtin::DominatedRay, 6).unwrap();
        assert_eq!(space.limit_edges[0].ends, Some(LimitEdgeEnds::VertexToEnd { vertex: 0, end: 0 }));
    }

    #[test]
    fn symmetric_ray_basic_open() {
        let space = EndSpace::compute(&Builtin::SymmetricRay, 4).unwrap();
        let b = space.basic_open(0, 2).unwrap();
        assert_eq!(b.class, "C2");
        assert_eq!(b.ends, vec![0]);
        assert!(b.limit_edges.is_empty());
        let pairs: Vec<(&str, &str)> = b.boundary.iter().map(|e| (e.tail.as_str(), e.head.as_str())).collect();
        assert_eq!(pairs, [("u1", "C2"), ("C2", "u1")]);
        assert!(matches!(space.basic_open(0, 5), Err(EndspaceError::DepthExceeded { .. })));
    }

    #[test]
    fn twin_limit_edge_lives_in_no_component() {
        let space = EndSpace::compute(&Builtin::TwinRays, 4).unwrap();
        for n in 0..=4 {
            for end in 0..2 {
                assert!(space.basic_open(end, n).unwrap().limit_edges.is_empty());
            }
        }
        assert_eq!(space.basic_open(0, 1).unwrap().ends, vec![0]);
    }
}
