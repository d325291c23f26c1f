use super::{
    check_endpoint, number_copies, truncation_graph, Answer, Beyond, Bundle, Cardinality,
    Certainty, ComponentView, Degree, Endpoint, ReachCut, Source, SourceError, VertexSet,
};
use crate::graph::{strong_components, MultiDigraph, SourceEdge, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// A finite digraph given by an edge list. Every oracle is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSource {
    name: String,
    labels: Vec<String>,
    edges: Vec<SourceEdge>,
}

impl FiniteSource {
    /// Repeated arcs become parallel edges. Loops are rejected.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        arcs: Vec<(usize, usize)>,
    ) -> Result<Self, SourceError> {
        for &(t, h) in &arcs {
            let bad = [t, h].into_iter().find(|&v| v >= labels.len());
            if let Some(v) = bad {
                return Err(SourceError::VertexOutOfRange(v));
            }
            if t == h {
                return Err(SourceError::BadParams(format!("loop at `{}`", labels[t])));
            }
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(SourceError::BadParams("duplicate vertex label".into()));
        }
        Ok(FiniteSource {
            name: name.into(),
            labels,
            edges: number_copies(arcs),
        })
    }

    pub fn edges(&self) -> &[SourceEdge] {
        &self.edges
    }

    fn split(&self, x: &BTreeSet<usize>) -> Vec<Option<usize>> {
        let g = self.truncation(self.labels.len());
        let keep: BTreeSet<VertexId> = g.vertices().filter(|v| !x.contains(&v.0)).collect();
        let (h, ids) = g.induced(&keep);
        let sc = strong_components(&h);
        let mut label = vec![None; self.labels.len()];
        for comp in &sc.components {
            let id = ids[comp[0].0].0;
            for v in comp {
                label[ids[v.0].0] = Some(id);
            }
        }
        label
    }
}

impl Source for FiniteSource {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn order(&self) -> Option<usize> {
        Some(self.labels.len())
    }

    fn label(&self, v: usize) -> String {
        self.labels[v].clone()
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn truncation(&self, n: usize) -> MultiDigraph {
        let n = n.min(self.labels.len());
        let edges: Vec<SourceEdge> = self
            .edges
            .iter()
            .filter(|e| e.tail < n && e.head < n)
            .copied()
            .collect();
        truncation_graph(self.labels[..n].to_vec(), &edges)
    }

    fn degree(&self, v: usize) -> Answer<Degree> {
        let i = self.edges.iter().filter(|e| e.head == v).count() as u64;
        let o = self.edges.iter().filter(|e| e.tail == v).count() as u64;
        Answer::exact(Degree {
            in_degree: Cardinality::Finite(i),
            out_degree: Cardinality::Finite(o),
        })
    }

    fn components(&self, x: &BTreeSet<usize>, _window: usize) -> Result<ComponentView, SourceError> {
        if let Some(&v) = x.iter().find(|&&v| v >= self.labels.len()) {
            return Err(SourceError::VertexOutOfRange(v));
        }
        let labels = self.split(x);
        let mut components: BTreeMap<usize, Cardinality> = BTreeMap::new();
        for id in labels.iter().flatten() {
            let size = components.entry(*id).or_insert(Cardinality::Finite(0));
            if let Cardinality::Finite(k) = size {
                *k += 1;
            }
        }
        Ok(ComponentView {
            separator: x.clone(),
            window: self.labels.len(),
            labels,
            count: Cardinality::Finite(components.len() as u64),
            components,
            beyond: Beyond::Nothing,
            certainty: Certainty::Exact,
        })
    }

    fn bundle(
        &self,
        x: &BTreeSet<usize>,
        from: Endpoint,
        to: Endpoint,
    ) -> Result<Answer<Bundle>, SourceError> {
        if from == to {
            return Err(SourceError::SameEndpoint);
        }
        let view = self.components(x, 0)?;
        check_endpoint(&view, from)?;
        check_endpoint(&view, to)?;
        let side = |e: Endpoint, v: usize| match e {
            Endpoint::Vertex(u) => u == v,
            Endpoint::Component(c) => view.labels[v] == Some(c),
        };
        let edges = self
            .edges
            .iter()
            .filter(|e| side(from, e.tail) && side(to, e.head))
            .copied()
            .collect();
        Ok(Answer::exact(Bundle::Finite(edges)))
    }

    fn reach_cut(&self, v: usize) -> Result<Answer<ReachCut>, SourceError> {
        if v >= self.labels.len() {
            return Err(SourceError::VertexOutOfRange(v));
        }
        let g = self.truncation(self.labels.len());
        let seen = g.reachable_from(VertexId(v));
        let inbound = self
            .edges
            .iter()
            .filter(|e| !seen[e.tail] && seen[e.head])
            .count() as u64;
        Ok(Answer::exact(ReachCut {
            spans_all: seen.iter().all(|&s| s),
            inbound: Cardinality::Finite(inbound),
        }))
    }

    fn meets_infinitely(
        &self,
        x: &BTreeSet<usize>,
        component: usize,
        _set: &VertexSet,
    ) -> Result<Answer<bool>, SourceError> {
        let view = self.components(x, 0)?;
        check_endpoint(&view, Endpoint::Component(component))?;
        Ok(Answer::exact(false))
    }

    fn window_for(&self, _depth: usize) -> usize {
        self.labels.len()
    }
}
