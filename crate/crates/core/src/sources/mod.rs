//! Finite presentations of countable digraphs.
//!
//! A [`Source`] enumerates the vertices of a possibly infinite digraph and
//! answers questions about `D - X` for finite vertex sets `X`: its strong
//! components, the edge bundles between them, degrees and reachability.
//! Every answer carries a [`Certainty`]; truncation-based heuristics report
//! `Provisional` and nothing downstream ever upgrades it.

mod builtin;
mod finite;
mod parse;
mod stencil;
mod tail;

pub use builtin::{builtin_from_spec, make_builtin, Builtin, BUILTIN_NAMES};
pub use finite::FiniteSource;
pub use parse::{open_source, parse_source, ParseError};
pub use stencil::StencilSource;

use crate::graph::{MultiDigraph, SourceEdge};
use serde::{Deserialize, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certainty {
    Provisional,
    Exact,
}

impl Certainty {
    /// The weaker of two certainties.
    pub fn and(self, other: Certainty) -> Certainty {
        self.min(other)
    }
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Provisional => "provisional",
            Certainty::Exact => "exact",
        })
    }
}

/// A count that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

impl Cardinality {
    pub fn is_finite(self) -> bool {
        matches!(self, Cardinality::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinality::Finite(k) => Some(k),
            Cardinality::Infinite => None,
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(k) => write!(f, "{k}"),
            Cardinality::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Cardinality {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinality::Finite(k) => s.serialize_u64(*k),
            Cardinality::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Answer<T> {
    pub value: T,
    pub certainty: Certainty,
}

impl<T> Answer<T> {
    pub fn exact(value: T) -> Self {
        Answer {
            value,
            certainty: Certainty::Exact,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Answer<U> {
        Answer {
            value: f(self.value),
            certainty: self.certainty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Degree {
    pub in_degree: Cardinality,
    pub out_degree: Cardinality,
}

/// What is known about the components of `D - X` that avoid the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Beyond {
    /// Every component meets the window.
    Nothing,
    /// Components outside the window exist and are all finite.
    FiniteComponents,
    Unknown,
}

/// Strong components of `D - X` as seen through the first `window` vertices.
///
/// Components are identified by the smallest enumeration index they
/// contain, so ids do not depend on the window once it is large enough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentView {
    pub separator: BTreeSet<usize>,
    pub window: usize,
    /// Component id of each vertex below `window`; `None` on `X`.
    pub labels: Vec<Option<usize>>,
    /// Size of each component meeting the window.
    pub components: BTreeMap<usize, Cardinality>,
    pub count: Cardinality,
    pub beyond: Beyond,
    pub certainty: Certainty,
}

impl ComponentView {
    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.labels.get(v).copied().flatten()
    }

    pub fn members_in_window(&self, id: usize) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&v| self.labels[v] == Some(id))
            .collect()
    }

    pub fn infinite_components(&self) -> Vec<usize> {
        self.components
            .iter()
            .filter(|(_, s)| **s == Cardinality::Infinite)
            .map(|(id, _)| *id)
            .collect()
    }

    /// Every component is accounted for in `components`.
    pub fn is_complete(&self) -> bool {
        self.beyond == Beyond::Nothing && self.count.is_finite()
    }
}

/// One side of a bundle: a vertex of `X` or a strong component of `D - X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Vertex(usize),
    Component(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bundle {
    Finite(Vec<SourceEdge>),
    Infinite,
}

impl Bundle {
    pub fn multiplicity(&self) -> Cardinality {
        match self {
            Bundle::Finite(edges) => Cardinality::Finite(edges.len() as u64),
            Bundle::Infinite => Cardinality::Infinite,
        }
    }
}

/// The cut `(V - R, R)` where `R` is everything reachable from a vertex.
/// Nothing leaves `R`, so the backward size is always zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReachCut {
    /// `R` is the whole vertex set, so there is no cut.
    pub spans_all: bool,
    /// Number of edges entering `R`.
    pub inbound: Cardinality,
}

/// A vertex set handed to the necklace and rank searches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexSet {
    All,
    Finite(BTreeSet<usize>),
    /// A named infinite part exposed by the source (see [`Source::parts`]).
    Part(String),
}

impl VertexSet {
    pub fn contains(&self, s: &dyn Source, v: usize) -> bool {
        match self {
            VertexSet::All => true,
            VertexSet::Finite(set) => set.contains(&v),
            VertexSet::Part(p) => s.in_part(p, v),
        }
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexSet::All => f.write_str("all"),
            VertexSet::Part(p) => write!(f, "part:{p}"),
            VertexSet::Finite(set) => {
                let items: Vec<String> = set.iter().map(|v| v.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("source offers no component oracle")]
    OracleUnavailable,
    #[error("{0} is not a strong component of D - X")]
    UnknownComponent(usize),
    #[error("vertex {0} is not in the separator")]
    NotInSeparator(usize),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("bundle endpoints coincide")]
    SameEndpoint,
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

/// A countable digraph given by enumeration and oracles.
///
/// Vertices are the indices `0, 1, 2, ...` of a fixed enumeration;
/// `X_n` is `{0, ..., n - 1}`.
pub trait Source: Send + Sync {
    fn name(&self) -> String;

    /// Number of vertices, `None` for countably infinite sources.
    fn order(&self) -> Option<usize>;

    fn label(&self, v: usize) -> String;

    fn index_of(&self, label: &str) -> Option<usize> {
        let bound = self.order().unwrap_or(4096);
        (0..bound).find(|&v| self.label(v) == label)
    }

    /// The digraph induced by the first `n` vertices (clamped to the order),
    /// with concrete edges sorted by `(tail, head, copy)`.
    fn truncation(&self, n: usize) -> MultiDigraph;

    fn degree(&self, v: usize) -> Answer<Degree>;

    fn components(&self, _x: &BTreeSet<usize>, _window: usize) -> Result<ComponentView, SourceError> {
        Err(SourceError::OracleUnavailable)
    }

    fn bundle(
        &self,
        _x: &BTreeSet<usize>,
        _from: Endpoint,
        _to: Endpoint,
    ) -> Result<Answer<Bundle>, SourceError> {
        Err(SourceError::OracleUnavailable)
    }

    fn reach_cut(&self, _v: usize) -> Result<Answer<ReachCut>, SourceError> {
        Err(SourceError::OracleUnavailable)
    }

    /// Names of designated infinite vertex sets.
    fn parts(&self) -> Vec<String> {
        Vec::new()
    }

    fn in_part(&self, _part: &str, _v: usize) -> bool {
        false
    }

    /// Whether `set` meets the component `component` of `D - X` in
    /// infinitely many vertices.
    fn meets_infinitely(
        &self,
        _x: &BTreeSet<usize>,
        _component: usize,
        _set: &VertexSet,
    ) -> Result<Answer<bool>, SourceError> {
        Err(SourceError::OracleUnavailable)
    }

    /// A window large enough for oracle answers about separators inside
    /// `X_depth`.
    fn window_for(&self, depth: usize) -> usize {
        depth
    }
}

impl fmt::Debug for dyn Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Source({})", self.name())
    }
}

/// Component labelling of the first `window` vertices outside `X`.
pub fn component_oracle(
    s: &dyn Source,
    x: &BTreeSet<usize>,
    window: usize,
) -> Result<ComponentView, SourceError> {
    s.components(x, window)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolidityVerdict {
    SolidAtX,
    NonSolidAtX,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolidityReport {
    pub separator: Vec<usize>,
    pub count: Cardinality,
    pub verdict: SolidityVerdict,
    pub certainty: Certainty,
}

/// Whether `D - X` has finitely many strong components.
pub fn solidity_check(
    s: &dyn Source,
    x: &BTreeSet<usize>,
    depth: usize,
) -> Result<SolidityReport, SourceError> {
    let view = s.components(x, depth.max(x.len()))?;
    let verdict = match view.count {
        Cardinality::Finite(_) => SolidityVerdict::SolidAtX,
        Cardinality::Infinite => SolidityVerdict::NonSolidAtX,
    };
    Ok(SolidityReport {
        separator: x.iter().copied().collect(),
        count: view.count,
        verdict,
        certainty: view.certainty,
    })
}

pub fn bundle_multiplicity(
    s: &dyn Source,
    x: &BTreeSet<usize>,
    from: Endpoint,
    to: Endpoint,
) -> Result<Answer<Cardinality>, SourceError> {
    if from == to {
        return Err(SourceError::SameEndpoint);
    }
    Ok(s.bundle(x, from, to)?.map(|b| b.multiplicity()))
}

/// Checks that a bundle endpoint makes sense for `view`.
pub(crate) fn check_endpoint(view: &ComponentView, e: Endpoint) -> Result<(), SourceError> {
    match e {
        Endpoint::Vertex(v) if view.separator.contains(&v) => Ok(()),
        Endpoint::Vertex(v) => Err(SourceError::NotInSeparator(v)),
        Endpoint::Component(c) if view.components.contains_key(&c) => Ok(()),
        Endpoint::Component(c) => Err(SourceError::UnknownComponent(c)),
    }
}

/// Sorted edges with parallel copies numbered.
pub(crate) fn number_copies(mut arcs: Vec<(usize, usize)>) -> Vec<SourceEdge> {
    arcs.sort_unstable();
    let mut out: Vec<SourceEdge> = Vec::with_capacity(arcs.len());
    for (t, h) in arcs {
        let copy = match out.last() {
            Some(p) if p.tail == t && p.head == h => p.copy + 1,
            _ => 0,
        };
        out.push(SourceEdge { tail: t, head: h, copy });
    }
    out
}

/// Builds a truncation graph from labels and numbered source edges.
pub(crate) fn truncation_graph(labels: Vec<String>, edges: &[SourceEdge]) -> MultiDigraph {
    use crate::graph::{EdgeKind, VertexId};
    let mut g = MultiDigraph::new(labels).expect("source labels are distinct");
    for e in edges {
        g.add_edge(VertexId(e.tail), VertexId(e.head), EdgeKind::Concrete, Some(*e))
            .expect("source digraphs are loopless");
    }
    g
}
