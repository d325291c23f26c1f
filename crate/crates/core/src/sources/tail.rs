//! Exact oracles for digraphs that are eventually periodic: the vertices
//! beyond a window are summarised by finitely many tail nodes, each standing
//! for an infinite strongly connected piece, joined to the window by
//! concrete boundary edges and to each other by infinite links.

use super::{Beyond, Bundle, Cardinality, Certainty, ComponentView, Endpoint, ReachCut, VertexSet};
use crate::graph::{strong_components, MultiDigraph, SourceEdge, VertexId};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Link {
    Finite(SourceEdge),
    /// Infinitely many edges between the two nodes.
    Infinite,
}

/// Node `i < window` is vertex `i`; node `window + t` is tail `t`.
#[derive(Debug, Clone)]
pub(crate) struct TailModel {
    pub window: usize,
    /// Parts met infinitely by each tail.
    pub tails: Vec<Vec<&'static str>>,
    pub links: Vec<(usize, usize, Link)>,
}

pub(crate) struct Split {
    /// Component id of every node, `None` on `X`.
    pub label: Vec<Option<usize>>,
    pub members: BTreeMap<usize, Vec<usize>>,
}

impl TailModel {
    /// `window_edges` are the edges of the truncation to `window`.
    pub fn new(
        window: usize,
        window_edges: &[SourceEdge],
        tails: Vec<Vec<&'static str>>,
        boundary: Vec<(usize, usize, Link)>,
    ) -> Self {
        let mut links: Vec<(usize, usize, Link)> = window_edges
            .iter()
            .map(|e| (e.tail, e.head, Link::Finite(*e)))
            .collect();
        links.extend(boundary);
        TailModel {
            window,
            tails,
            links,
        }
    }

    fn node_count(&self) -> usize {
        self.window + self.tails.len()
    }

    pub fn split(&self, x: &BTreeSet<usize>) -> Split {
        let n = self.node_count();
        let mut g = MultiDigraph::with_order(n);
        for &(a, b, _) in &self.links {
            if !x.contains(&a) && !x.contains(&b) {
                g.add_arc(a, b).expect("tail links are loopless");
            }
        }
        let sc = strong_components(&g);
        let mut label = vec![None; n];
        let mut members = BTreeMap::new();
        for comp in &sc.components {
            let nodes: Vec<usize> = comp.iter().map(|v: &VertexId| v.0).collect();
            if nodes.len() == 1 && x.contains(&nodes[0]) {
                continue;
            }
            let id = nodes[0];
            for &v in &nodes {
                label[v] = Some(id);
            }
            members.insert(id, nodes);
        }
        Split { label, members }
    }

    fn has_tail(&self, nodes: &[usize]) -> bool {
        nodes.iter().any(|&v| v >= self.window)
    }

    pub fn view(&self, x: &BTreeSet<usize>) -> ComponentView {
        let split = self.split(x);
        let components: BTreeMap<usize, Cardinality> = split
            .members
            .iter()
            .map(|(&id, nodes)| {
                let size = if self.has_tail(nodes) {
                    Cardinality::Infinite
                } else {
                    Cardinality::Finite(nodes.len() as u64)
                };
                (id, size)
            })
            .collect();
        ComponentView {
            separator: x.clone(),
            window: self.window,
            labels: split.label[..self.window].to_vec(),
            count: Cardinality::Finite(components.len() as u64),
            components,
            beyond: Beyond::Nothing,
            certainty: Certainty::Exact,
        }
    }

    pub fn bundle(&self, x: &BTreeSet<usize>, from: Endpoint, to: Endpoint) -> Bundle {
        let split = self.split(x);
        let side = |e: Endpoint, v: usize| match e {
            Endpoint::Vertex(u) => u == v,
            Endpoint::Component(c) => split.label[v] == Some(c),
        };
        let mut edges = Vec::new();
        for &(a, b, link) in &self.links {
            if side(from, a) && side(to, b) {
                match link {
                    Link::Infinite => return Bundle::Infinite,
                    Link::Finite(e) => edges.push(e),
                }
            }
        }
        edges.sort();
        Bundle::Finite(edges)
    }

    pub fn reach(&self, v: usize) -> ReachCut {
        let n = self.node_count();
        let mut seen = vec![false; n];
        seen[v] = true;
        let mut stack = vec![v];
        while let Some(a) = stack.pop() {
            for &(t, h, _) in &self.links {
                if t == a && !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        let mut inbound = Cardinality::Finite(0);
        for &(t, h, link) in &self.links {
            if !seen[t] && seen[h] {
                inbound = match (inbound, link) {
                    (Cardinality::Finite(k), Link::Finite(_)) => Cardinality::Finite(k + 1),
                    _ => Cardinality::Infinite,
                };
            }
        }
        ReachCut {
            spans_all: seen.iter().all(|&s| s),
            inbound,
        }
    }

    pub fn meets(&self, x: &BTreeSet<usize>, component: usize, set: &VertexSet) -> Option<bool> {
        let split = self.split(x);
        let nodes = split.members.get(&component)?;
        let tails = nodes
            .iter()
            .filter(|&&v| v >= self.window)
            .map(|&v| &self.tails[v - self.window]);
        Some(match set {
            VertexSet::Finite(_) => false,
            VertexSet::All => tails.count() > 0,
            VertexSet::Part(p) => tails.into_iter().any(|parts| parts.contains(&p.as_str())),
        })
    }
}
