//! Euler tours and spanning walks of the end compactification, represented
//! by compatible walks on the levels of the quotient chain.

mod check;
mod lift;
mod span;

pub use check::{check_euler, EulerCheck, EulerVerdict, EulerWitness, WitnessCut};
pub use lift::{lift_euler, DEFAULT_TOUR_LIMIT};
pub use span::span_walk;

use crate::graph::{is_valid_walk, EdgeId, VertexId, Walk, WalkRequirements, WalkViolation};
use crate::quotient::{BondingMap, EdgeImage, QuotientChain, QuotientError, QuotientLevel};
use crate::sources::{Certainty, Source, SourceError};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TourError {
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("the Euler condition fails: {witness}")]
    EulerConditionFailed { witness: EulerWitness },
    #[error("level {level} is not strongly connected: no path from {from} to {to}")]
    NotStronglyConnected { level: usize, from: String, to: String },
    #[error("walk does not live on level {level}")]
    LevelMismatch { level: usize },
    #[error("cut side splits the class containing vertex {vertex}")]
    SideNotClassAligned { vertex: usize },
    #[error("no class {class} at level 0")]
    BadAnchor { class: usize },
    #[error("depth must be at least {min}")]
    DepthTooSmall { min: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreadKind {
    EulerTour,
    SpanningWalk,
}

impl ThreadKind {
    fn requirements(self) -> WalkRequirements {
        match self {
            ThreadKind::EulerTour => WalkRequirements::EULER_TOUR,
            ThreadKind::SpanningWalk => WalkRequirements::CLOSED_SPANNING,
        }
    }
}

/// One walk per level `first_level..first_level + walks.len()`, each
/// projecting onto its predecessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub kind: ThreadKind,
    pub first_level: usize,
    pub walks: Vec<Walk>,
    /// `certificates[i]` records whether `walks[i]` projects onto
    /// `walks[i - 1]`; the first entry is always true.
    pub certificates: Vec<bool>,
    /// False when the search stopped short of the requested depth; `walks`
    /// then holds the deepest prefix found.
    pub complete: bool,
    pub requested_depth: usize,
    pub certainty: Certainty,
}

pub type TourThread = Thread;
pub type WalkThread = Thread;

impl Thread {
    pub fn last_level(&self) -> usize {
        self.first_level + self.walks.len().saturating_sub(1)
    }

    pub fn walk_at(&self, level: usize) -> Option<&Walk> {
        level
            .checked_sub(self.first_level)
            .and_then(|i| self.walks.get(i))
    }

    pub fn anchor(&self) -> Option<VertexId> {
        self.walks.first().map(Walk::start)
    }
}

/// Class ids and edge ids of a walk, alternating.
pub fn walk_items(level: &QuotientLevel, w: &Walk) -> Vec<String> {
    let mut out = Vec::with_capacity(2 * w.len() + 1);
    out.push(level.classes[w.start().0].id.clone());
    for (e, v) in w.edges().iter().zip(&w.vertices()[1..]) {
        out.push(format!("e{}", e.0));
        out.push(level.classes[v.0].id.clone());
    }
    out
}

/// A thread bound to its chain for serialization.
pub struct ThreadJson<'a> {
    pub thread: &'a Thread,
    pub chain: &'a QuotientChain,
}

#[derive(Serialize)]
struct LevelWalkJson {
    n: usize,
    walk: Vec<String>,
    certificate: bool,
}

impl Serialize for ThreadJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let t = self.thread;
        let levels: Vec<LevelWalkJson> = t
            .walks
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let n = t.first_level + i;
                LevelWalkJson {
                    n,
                    walk: walk_items(&self.chain.levels[n], w),
                    certificate: t.certificates[i],
                }
            })
            .collect();
        let mut st = s.serialize_struct("Thread", 6)?;
        st.serialize_field("kind", &t.kind)?;
        st.serialize_field("complete", &t.complete)?;
        st.serialize_field("depth", &t.requested_depth)?;
        st.serialize_field("levels", &levels)?;
        st.serialize_field("certificates", &t.certificates.iter().all(|c| *c))?;
        st.serialize_field("certainty", &t.certainty)?;
        st.end()
    }
}

/// Image of `w` under `b` with collapsed edges erased.
pub fn project_walk(b: &BondingMap, w: &Walk) -> Result<Walk, TourError> {
    let mismatch = TourError::LevelMismatch { level: b.from };
    let class = |v: VertexId| b.vertex_map.get(v.0).copied().ok_or(mismatch.clone());
    let mut out = Walk::trivial(VertexId(class(w.start())?));
    for (e, v) in w.edges().iter().zip(&w.vertices()[1..]) {
        let to = class(*v)?;
        match b.edge_map.get(e.0).copied().flatten() {
            Some(EdgeImage::Edge(img)) => out.push(img, VertexId(to)),
            Some(EdgeImage::Class(c)) if c == to && c == out.end().0 => {}
            _ => return Err(mismatch),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ThreadViolation {
    MissingLevel { level: usize },
    Walk { level: usize, violation: WalkViolation },
    Projection { level: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThreadCheck {
    pub ok: bool,
    pub violation: Option<ThreadViolation>,
}

/// Rechecks every level walk and every projection against `chain`.
pub fn verify_thread(chain: &QuotientChain, t: &Thread) -> ThreadCheck {
    let fail = |v| ThreadCheck {
        ok: false,
        violation: Some(v),
    };
    let req = t.kind.requirements();
    for (i, w) in t.walks.iter().enumerate() {
        let n = t.first_level + i;
        let Some(level) = chain.levels.get(n) else {
            return fail(ThreadViolation::MissingLevel { level: n });
        };
        let verdict = is_valid_walk(&level.graph, w, req);
        if let Some(violation) = verdict.violation {
            return fail(ThreadViolation::Walk { level: n, violation });
        }
        if i == 0 {
            continue;
        }
        let projected = chain
            .bonding(n, n - 1)
            .ok()
            .and_then(|b| project_walk(&b, w).ok());
        if projected.as_ref() != Some(&t.walks[i - 1]) {
            return fail(ThreadViolation::Projection { level: n });
        }
    }
    ThreadCheck {
        ok: true,
        violation: None,
    }
}

pub(crate) fn certificates(chain: &QuotientChain, first_level: usize, walks: &[Walk]) -> Vec<bool> {
    (0..walks.len())
        .map(|i| {
            i == 0 || {
                let n = first_level + i;
                chain
                    .bonding(n, n - 1)
                    .ok()
                    .and_then(|b| project_walk(&b, &walks[i]).ok())
                    .is_some_and(|p| p == walks[i - 1])
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JumpingArcCheck {
    pub ok: bool,
    /// Edges of the walk running from side 1 to side 2, by position.
    pub crossings: Vec<usize>,
    /// First segment from side 1 to side 2 without a crossing edge.
    pub bad_segment: Option<(usize, usize)>,
    pub invalid: Option<WalkViolation>,
}

/// Whether every stretch of `w` that starts on side 1 and ends on side 2
/// uses an edge from a side-1 class to a side-2 class. `side1` is a set of
/// source vertices inside the level window and must be a union of classes.
pub fn check_jumping_arc(
    level: &QuotientLevel,
    side1: &BTreeSet<usize>,
    w: &Walk,
) -> Result<JumpingArcCheck, TourError> {
    let mut class_side: Vec<Option<bool>> = vec![None; level.class_count()];
    for (v, &c) in level.class_of.iter().enumerate() {
        let inside = side1.contains(&v);
        match class_side[c] {
            None => class_side[c] = Some(inside),
            Some(s) if s != inside => return Err(TourError::SideNotClassAligned { vertex: v }),
            Some(_) => {}
        }
    }
    if let Some(&v) = side1.iter().find(|&&v| v >= level.class_of.len()) {
        return Err(TourError::SideNotClassAligned { vertex: v });
    }
    let verdict = is_valid_walk(&level.graph, w, WalkRequirements::default());
    if !verdict.ok {
        return Ok(JumpingArcCheck {
            ok: false,
            crossings: Vec::new(),
            bad_segment: None,
            invalid: verdict.violation,
        });
    }
    let on_side1 = |v: VertexId| class_side[v.0] == Some(true);
    let crosses = |e: EdgeId| {
        let edge = level.graph.edge(e);
        on_side1(edge.tail) && !on_side1(edge.head)
    };
    let crossings: Vec<usize> = (0..w.len()).filter(|&i| crosses(w.edges()[i])).collect();
    let mut bad_segment = None;
    let mut start: Option<usize> = None;
    for (i, &v) in w.vertices().iter().enumerate() {
        if on_side1(v) {
            start.get_or_insert(i);
        } else if let Some(s) = start.take() {
            if !(s..i).any(|k| crosses(w.edges()[k])) {
                bad_segment = Some((s, i));
                break;
            }
        }
    }
    Ok(JumpingArcCheck {
        ok: bad_segment.is_none(),
        crossings,
        bad_segment,
        invalid: None,
    })
}

/// Depth to which a source can be explored: finite sources stop at their
/// order.
pub(crate) fn effective_depth(s: &dyn Source, depth: usize) -> usize {
    s.order().map_or(depth, |o| depth.min(o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::{Builtin, FiniteSource};

    fn sym_chain(depth: usize) -> QuotientChain {
        QuotientChain::build(&Builtin::SymmetricRay, depth).unwrap()
    }

    #[test]
    fn identity_projection_keeps_the_walk() {
        let chain = sym_chain(3);
        let t = span_walk(&Builtin::SymmetricRay, 3).unwrap();
        let b = chain.bonding(3, 3).unwrap();
        assert_eq!(project_walk(&b, &t.walks[2]).unwrap(), t.walks[2]);
    }

    #[test]
    fn excursion_into_a_collapsed_class_is_erased() {
        // u0 -> u1 -> u2 -> u1 -> u0 at level 3 collapses to u0 -> C1 -> u0.
        let chain = sym_chain(3);
        let fine = &chain.levels[3];
        let coarse = &chain.levels[1];
        let b = chain.bonding(3, 1).unwrap();
        let step = |l: &QuotientLevel, a: usize, c: usize| {
            l.graph
                .out_edges(VertexId(a))
                .iter()
                .copied()
                .find(|&e| l.graph.edge(e).head == VertexId(c))
                .unwrap()
        };
        let mut w = Walk::trivial(VertexId(0));
        for (a, c) in [(0, 1), (1, 2), (2, 1), (1, 0)] {
            w.push(step(fine, a, c), VertexId(c));
        }
        let p = project_walk(&b, &w).unwrap();
        assert_eq!(p.vertices(), &[VertexId(0), VertexId(1), VertexId(0)]);
        assert_eq!(p.edges(), &[step(coarse, 0, 1), step(coarse, 1, 0)]);
    }

    #[test]
    fn projection_rejects_foreign_walks() {
        let chain = sym_chain(2);
        let b = chain.bonding(2, 1).unwrap();
        let w = Walk::from_parts(vec![VertexId(0), VertexId(9)], vec![EdgeId(40)]).unwrap();
        assert_eq!(project_walk(&b, &w), Err(TourError::LevelMismatch { level: 2 }));
    }

    #[test]
    fn rotated_tour_breaks_the_projection() {
        let s = Builtin::SymmetricRay;
        let chain = sym_chain(4);
        let mut t = lift_euler(&s, 4, 0, DEFAULT_TOUR_LIMIT).unwrap();
        let w = &t.walks[3];
        let g = &chain.levels[3].graph;
        let mut edges = w.edges().to_vec();
        edges.rotate_left(1);
        t.walks[3] = Walk::from_edges(g, g.edge(edges[0]).tail, &edges);
        let v = verify_thread(&chain, &t);
        assert_eq!(v.violation, Some(ThreadViolation::Projection { level: 3 }));
    }

    fn two_cycles() -> FiniteSource {
        // {0,1} and {2,3} are cycles joined by 1 -> 2 and 3 -> 0.
        let arcs = vec![(0, 1), (1, 0), (2, 3), (3, 2), (1, 2), (3, 0)];
        FiniteSource::new("t", (0..4).map(|i| format!("x{i}")).collect(), arcs).unwrap()
    }

    #[test]
    fn jumping_arc_checks() {
        let s = two_cycles();
        let chain = QuotientChain::build(&s, 4).unwrap();
        let level = &chain.levels[4];
        let side1 = BTreeSet::from([0, 1]);
        let inside = Walk::trivial(VertexId(0));
        assert!(check_jumping_arc(level, &side1, &inside).unwrap().ok);
        let t = span_walk(&s, 4).unwrap();
        let r = check_jumping_arc(level, &side1, t.walks.last().unwrap()).unwrap();
        assert!(r.ok);
        let crossing: Vec<EdgeId> = r.crossings.iter().map(|&i| t.walks.last().unwrap().edges()[i]).collect();
        assert!(crossing.iter().all(|e| {
            let e = level.graph.edge(*e);
            (e.tail.0, e.head.0) == (1, 2)
        }));
        let teleport = Walk::from_parts(vec![VertexId(0), VertexId(3)], vec![EdgeId(0)]).unwrap();
        let r = check_jumping_arc(level, &side1, &teleport).unwrap();
        assert!(!r.ok && r.invalid.is_some());
    }

    #[test]
    fn misaligned_side_is_rejected() {
        let chain = sym_chain(1);
        let side1 = BTreeSet::from([1]);
        let w = Walk::trivial(VertexId(0));
        assert!(matches!(
            check_jumping_arc(&chain.levels[1], &side1, &w),
            Err(TourError::SideNotClassAligned { .. })
        ));
    }
}
