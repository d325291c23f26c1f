use super::QuotientError;
use crate::graph::{EdgeId, EdgeKind, MultiDigraph, SourceEdge, VertexId};
use crate::sources::{
    solidity_check, Bundle, Cardinality, Certainty, ComponentView, Endpoint, Source,
};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassKind {
    Singleton { vertex: usize },
    Component { component: usize, size: Cardinality },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Class {
    /// Vertex label for singletons, `C<min index>` for components.
    pub id: String,
    /// Smallest enumeration index in the class.
    pub rep: usize,
    #[serde(flatten)]
    pub kind: ClassKind,
}

impl Class {
    pub fn is_infinite(&self) -> bool {
        matches!(
            self.kind,
            ClassKind::Component {
                size: Cardinality::Infinite,
                ..
            }
        )
    }
}

/// The quotient `D / P_{X_n}`: vertices of `X_n` stay singletons, each
/// strong component of `D - X_n` becomes one class. Class `i` is vertex `i`
/// of `graph`; classes are ordered by representative, so class `v` is the
/// singleton `{v}` for `v < n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientLevel {
    pub n: usize,
    pub window: usize,
    pub classes: Vec<Class>,
    pub graph: MultiDigraph,
    /// Class index of every source vertex below `window`.
    pub class_of: Vec<usize>,
    pub certainty: Certainty,
}

/// Default cap on the number of edges of one level.
pub const DEFAULT_EDGE_BOUND: usize = 100_000;

impl QuotientLevel {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, id: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.id == id)
    }

    /// Class index of the component with the given id.
    pub fn component_class(&self, component: usize) -> Option<usize> {
        self.classes.iter().position(|c| {
            matches!(c.kind, ClassKind::Component { component: k, .. } if k == component)
        })
    }

    pub fn class_of_vertex(&self, v: usize) -> Option<usize> {
        self.class_of.get(v).copied()
    }

    fn endpoint(&self, class: usize) -> Endpoint {
        match self.classes[class].kind {
            ClassKind::Singleton { vertex } => Endpoint::Vertex(vertex),
            ClassKind::Component { component, .. } => Endpoint::Component(component),
        }
    }

    /// Same level with one edge deleted. Only meant for fault injection.
    pub fn without_edge(&self, edge: EdgeId) -> QuotientLevel {
        let mut g = MultiDigraph::new(self.graph.labels().iter().cloned()).expect("labels are distinct");
        for id in self.graph.edge_ids().filter(|&e| e != edge) {
            let e = self.graph.edge(id);
            g.add_edge(e.tail, e.head, e.kind, e.origin).expect("copied edge is valid");
        }
        QuotientLevel {
            graph: g,
            ..self.clone()
        }
    }
}

/// Level `n` seen through `s.window_for(n)`.
pub fn level(s: &dyn Source, n: usize) -> Result<QuotientLevel, QuotientError> {
    level_in_window(s, n, s.window_for(n), DEFAULT_EDGE_BOUND)
}

pub fn level_in_window(
    s: &dyn Source,
    n: usize,
    window: usize,
    edge_bound: usize,
) -> Result<QuotientLevel, QuotientError> {
    if let Some(order) = s.order() {
        if n > order {
            return Err(QuotientError::BeyondOrder { n, order });
        }
    }
    let x: BTreeSet<usize> = (0..n).collect();
    let view = s.components(&x, window.max(n))?;
    if !view.is_complete() {
        let report = solidity_check(s, &x, window.max(n))?;
        return Err(QuotientError::NonSolidAtLevel { n, report });
    }
    build(s, n, &view, edge_bound)
}

fn build(
    s: &dyn Source,
    n: usize,
    view: &ComponentView,
    edge_bound: usize,
) -> Result<QuotientLevel, QuotientError> {
    let mut classes: Vec<Class> = (0..n)
        .map(|v| Class {
            id: s.label(v),
            rep: v,
            kind: ClassKind::Singleton { vertex: v },
        })
        .collect();
    for (&component, &size) in &view.components {
        classes.push(Class {
            id: format!("C{component}"),
            rep: component,
            kind: ClassKind::Component { component, size },
        });
    }
    classes.sort_by_key(|c| c.rep);

    let mut level = QuotientLevel {
        n,
        window: view.window,
        graph: MultiDigraph::new(classes.iter().map(|c| c.id.clone()))
            .map_err(|e| QuotientError::Internal(e.to_string()))?,
        class_of: Vec::new(),
        classes,
        certainty: view.certainty,
    };
    level.class_of = (0..view.window)
        .map(|v| {
            let target = match view.component_of(v) {
                Some(c) => level.component_class(c),
                None => Some(v),
            };
            target.ok_or_else(|| QuotientError::Internal(format!("vertex {v} has no class")))
        })
        .collect::<Result<_, _>>()?;

    let x: BTreeSet<usize> = (0..n).collect();
    let k = level.classes.len();
    let mut edges: Vec<(usize, usize, Option<SourceEdge>)> = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let ans = s.bundle(&x, level.endpoint(a), level.endpoint(b))?;
            level.certainty = level.certainty.and(ans.certainty);
            match ans.value {
                Bundle::Infinite => edges.push((a, b, None)),
                Bundle::Finite(list) => edges.extend(list.into_iter().map(|e| (a, b, Some(e)))),
            }
            if edges.len() > edge_bound {
                return Err(QuotientError::TooManyEdges { n, bound: edge_bound });
            }
        }
    }
    for (a, b, origin) in edges {
        let kind = if origin.is_some() {
            EdgeKind::Concrete
        } else {
            EdgeKind::Quotient
        };
        level
            .graph
            .add_edge(VertexId(a), VertexId(b), kind, origin)
            .map_err(|e| QuotientError::Internal(e.to_string()))?;
    }
    Ok(level)
}
