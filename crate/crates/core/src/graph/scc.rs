use super::{EdgeKind, MultiDigraph, VertexId};

/// Strong components, listed in a topological order of the condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongComponents {
    /// Component index of every vertex.
    pub label: Vec<usize>,
    /// Members of each component, sorted.
    pub components: Vec<Vec<VertexId>>,
}

impl StrongComponents {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, v: VertexId) -> usize {
        self.label[v.0]
    }
}

/// Iterative Tarjan. Roots are taken in vertex order and out-edges in edge-id
/// order, so the output is a function of the graph alone.
pub fn strong_components(g: &MultiDigraph) -> StrongComponents {
    let n = g.vertex_count();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut found: Vec<Vec<VertexId>> = Vec::new();
    let mut counter = 0;
    // (vertex, position in its out-edge list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let outs = g.out_edges(VertexId(v));
            if *pos < outs.len() {
                let w = g.edge(outs[*pos]).head.0;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack holds v");
                        on_stack[w] = false;
                        comp.push(VertexId(w));
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    found.push(comp);
                }
            }
        }
    }

    // Tarjan emits sinks first.
    found.reverse();
    let mut label = vec![0; n];
    for (i, comp) in found.iter().enumerate() {
        for v in comp {
            label[v.0] = i;
        }
    }
    StrongComponents {
        label,
        components: found,
    }
}

/// The condensation: one vertex per strong component (in the topological
/// order of [`strong_components`]), one concrete edge per edge of `g`
/// joining distinct components.
pub fn condensation(g: &MultiDigraph) -> (StrongComponents, MultiDigraph) {
    let sc = strong_components(g);
    let mut c = MultiDigraph::with_order(sc.len());
    for e in g.edges() {
        let (a, b) = (sc.label[e.tail.0], sc.label[e.head.0]);
        if a != b {
            c.add_edge(VertexId(a), VertexId(b), EdgeKind::Concrete, e.origin)
                .expect("components are distinct");
        }
    }
    (sc, c)
}
