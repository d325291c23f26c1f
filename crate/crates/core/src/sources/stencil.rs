use super::{
    check_endpoint, number_copies, truncation_graph, Answer, Beyond, Bundle, Cardinality,
    Certainty, ComponentView, Degree, Endpoint, ReachCut, Source, SourceError, VertexSet,
};
use crate::graph::{strong_components, MultiDigraph, SourceEdge, VertexId};
use std::collections::{BTreeMap, BTreeSet};

/// A layered digraph repeating one pattern forever: layer `t` holds
/// vertices `(t, 0) .. (t, width - 1)`, vertex `(t, i)` has index
/// `t * width + i` and label `t.i`, and each rule `(i, j, d)` puts an edge
/// `(t, i) -> (t + d, j)` for every layer `t >= max(0, -d)`.
///
/// Oracles look at three nested truncations one period apart and report
/// `Exact` only when the component labelling inside the base window is the
/// same in all three. Bundles and reach cuts are always `Provisional`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StencilSource {
    width: usize,
    rules: Vec<(usize, usize, i64)>,
    window: Option<usize>,
}

struct Layers {
    windows: [usize; 3],
    labels: [Vec<Option<usize>>; 3],
    stable: bool,
}

impl StencilSource {
    pub fn new(width: usize, rules: Vec<(usize, usize, i64)>) -> Result<Self, SourceError> {
        if width == 0 {
            return Err(SourceError::BadParams("width must be positive".into()));
        }
        for &(i, j, d) in &rules {
            if i >= width || j >= width {
                return Err(SourceError::BadParams(format!("position out of range in edge {i} {j} {d}")));
            }
            if !(-1..=1).contains(&d) {
                return Err(SourceError::BadParams(format!("offset {d} not in -1..=1")));
            }
            if d == 0 && i == j {
                return Err(SourceError::BadParams(format!("edge {i} {j} 0 is a loop")));
            }
        }
        Ok(StencilSource {
            width,
            rules,
            window: None,
        })
    }

    /// Overrides the base window of the oracles.
    pub fn with_window(mut self, window: usize) -> Self {
        self.window = Some(window);
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn arcs(&self, n: usize) -> Vec<(usize, usize)> {
        let k = self.width;
        let mut out = Vec::new();
        for v in 0..n {
            let (t, i) = (v / k, v % k);
            for &(ri, j, d) in &self.rules {
                if ri != i || (t as i64) + d < 0 {
                    continue;
                }
                let h = ((t as i64 + d) as usize) * k + j;
                if h < n {
                    out.push((v, h));
                }
            }
        }
        out
    }

    fn base_window(&self, x: &BTreeSet<usize>, requested: usize) -> usize {
        let k = self.width;
        let floor = (x.last().map_or(0, |m| m / k) + 3) * k;
        let rule = self
            .window
            .unwrap_or_else(|| requested.max(4 * k * (x.len() + 1)));
        rule.max(floor).div_ceil(k) * k
    }

    fn split(&self, x: &BTreeSet<usize>, n: usize) -> Vec<Option<usize>> {
        let g = self.truncation(n);
        let keep: BTreeSet<VertexId> = g.vertices().filter(|v| !x.contains(&v.0)).collect();
        let (h, ids) = g.induced(&keep);
        let sc = strong_components(&h);
        let mut label = vec![None; n];
        for comp in &sc.components {
            let id = ids[comp[0].0].0;
            for v in comp {
                label[ids[v.0].0] = Some(id);
            }
        }
        label
    }

    fn layers(&self, x: &BTreeSet<usize>, requested: usize) -> Layers {
        let w0 = self.base_window(x, requested);
        let windows = [w0, w0 + self.width, w0 + 2 * self.width];
        let labels = windows.map(|w| self.split(x, w));
        let stable = labels[0][..w0] == labels[1][..w0] && labels[1][..w0] == labels[2][..w0];
        Layers {
            windows,
            labels,
            stable,
        }
    }

    fn size_in(labels: &[Option<usize>], id: usize) -> usize {
        labels.iter().filter(|l| **l == Some(id)).count()
    }

    /// Which of the two trailing periods an edge or vertex position falls in.
    fn period_of(layers: &Layers, pos: usize) -> Option<usize> {
        let [w0, w1, w2] = layers.windows;
        if (w0..w1).contains(&pos) {
            Some(0)
        } else if (w1..w2).contains(&pos) {
            Some(1)
        } else {
            None
        }
    }

    fn view_from(&self, x: &BTreeSet<usize>, layers: &Layers) -> ComponentView {
        let [w0, w1, _] = layers.windows;
        let [_, l1, l2] = &layers.labels;
        let grows = |id: usize| Self::size_in(l2, id) > Self::size_in(l1, id);
        let labels = l2[..w0].to_vec();
        let mut components = BTreeMap::new();
        for &id in labels.iter().flatten() {
            components.entry(id).or_insert_with(|| {
                if grows(id) {
                    Cardinality::Infinite
                } else {
                    Cardinality::Finite(Self::size_in(l2, id) as u64)
                }
            });
        }
        let outside: BTreeSet<usize> = l2[w0..w1].iter().flatten().filter(|&&id| id >= w0).copied().collect();
        let (beyond, count) = if outside.is_empty() {
            (Beyond::Nothing, Cardinality::Finite(components.len() as u64))
        } else if outside.iter().any(|&id| grows(id)) {
            (Beyond::Unknown, Cardinality::Infinite)
        } else {
            (Beyond::FiniteComponents, Cardinality::Infinite)
        };
        ComponentView {
            separator: x.clone(),
            window: w0,
            labels,
            components,
            count,
            beyond,
            certainty: if layers.stable {
                Certainty::Exact
            } else {
                Certainty::Provisional
            },
        }
    }

    fn provisional<T>(value: T) -> Answer<T> {
        Answer {
            value,
            certainty: Certainty::Provisional,
        }
    }
}

impl Source for StencilSource {
    fn name(&self) -> String {
        format!("stencil(width {})", self.width)
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn label(&self, v: usize) -> String {
        format!("{}.{}", v / self.width, v % self.width)
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        let (t, i) = label.split_once('.')?;
        let (t, i): (usize, usize) = (t.parse().ok()?, i.parse().ok()?);
        let v = t * self.width + i;
        (i < self.width && self.label(v) == label).then_some(v)
    }

    fn truncation(&self, n: usize) -> MultiDigraph {
        let edges = number_copies(self.arcs(n));
        truncation_graph((0..n).map(|v| self.label(v)).collect(), &edges)
    }

    fn degree(&self, v: usize) -> Answer<Degree> {
        let (t, p) = ((v / self.width) as i64, v % self.width);
        let out = self
            .rules
            .iter()
            .filter(|&&(i, _, d)| i == p && t + d >= 0)
            .count() as u64;
        let inn = self
            .rules
            .iter()
            .filter(|&&(_, j, d)| j == p && t - d >= 0)
            .count() as u64;
        Answer::exact(Degree {
            in_degree: Cardinality::Finite(inn),
            out_degree: Cardinality::Finite(out),
        })
    }

    fn components(&self, x: &BTreeSet<usize>, window: usize) -> Result<ComponentView, SourceError> {
        Ok(self.view_from(x, &self.layers(x, window)))
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
        let reach = |e: Endpoint| match e {
            Endpoint::Vertex(v) | Endpoint::Component(v) => v + 1,
        };
        let layers = self.layers(x, reach(from).max(reach(to)));
        let view = self.view_from(x, &layers);
        check_endpoint(&view, from)?;
        check_endpoint(&view, to)?;
        let l2 = &layers.labels[2];
        let side = |e: Endpoint, v: usize| match e {
            Endpoint::Vertex(u) => u == v,
            Endpoint::Component(c) => l2[v] == Some(c),
        };
        let edges: Vec<SourceEdge> = number_copies(self.arcs(layers.windows[2]))
            .into_iter()
            .filter(|e| side(from, e.tail) && side(to, e.head))
            .collect();
        let mut seen = [false; 2];
        for e in &edges {
            if let Some(p) = Self::period_of(&layers, e.tail.max(e.head)) {
                seen[p] = true;
            }
        }
        let bundle = if seen == [true, true] {
            Bundle::Infinite
        } else {
            let w1 = layers.windows[1];
            Bundle::Finite(edges.into_iter().filter(|e| e.tail.max(e.head) < w1).collect())
        };
        Ok(Self::provisional(bundle))
    }

    fn reach_cut(&self, v: usize) -> Result<Answer<ReachCut>, SourceError> {
        let x = BTreeSet::from([v]);
        let w0 = self.base_window(&x, v + 1);
        let (w1, w2) = (w0 + self.width, w0 + 2 * self.width);
        let g = self.truncation(w2);
        let seen = g.reachable_from(VertexId(v));
        let mut counts = [0u64; 3];
        for e in g.edges() {
            let (t, h) = (e.tail.0, e.head.0);
            if !seen[t] && seen[h] {
                let pos = t.max(h);
                counts[if pos < w0 { 0 } else if pos < w1 { 1 } else { 2 }] += 1;
            }
        }
        let inbound = if counts[1] > 0 && counts[2] > 0 {
            Cardinality::Infinite
        } else {
            Cardinality::Finite(counts[0] + counts[1])
        };
        Ok(Self::provisional(ReachCut {
            spans_all: seen[..w1].iter().all(|&s| s),
            inbound,
        }))
    }

    fn parts(&self) -> Vec<String> {
        (0..self.width).map(|i| i.to_string()).collect()
    }

    fn in_part(&self, part: &str, v: usize) -> bool {
        part.parse::<usize>().is_ok_and(|p| v % self.width == p)
    }

    fn meets_infinitely(
        &self,
        x: &BTreeSet<usize>,
        component: usize,
        set: &VertexSet,
    ) -> Result<Answer<bool>, SourceError> {
        let layers = self.layers(x, component + 1);
        let view = self.view_from(x, &layers);
        check_endpoint(&view, Endpoint::Component(component))?;
        if view.components[&component] != Cardinality::Infinite {
            return Ok(Self::provisional(false));
        }
        let [_, w1, w2] = layers.windows;
        let hit = match set {
            VertexSet::All => true,
            VertexSet::Finite(_) => false,
            VertexSet::Part(p) => (w1..w2)
                .any(|v| layers.labels[2][v] == Some(component) && self.in_part(p, v)),
        };
        Ok(Self::provisional(hit))
    }

    fn window_for(&self, depth: usize) -> usize {
        let x: BTreeSet<usize> = (0..depth).collect();
        self.base_window(&x, depth)
    }
}
