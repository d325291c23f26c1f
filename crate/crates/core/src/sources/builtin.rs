//! The built-in example digraphs.

use super::tail::{Link, TailModel};
use super::{
    check_endpoint, number_copies, truncation_graph, Answer, Beyond, Bundle, Cardinality,
    Certainty, ComponentView, Degree, Endpoint, ReachCut, Source, SourceError, VertexSet,
};
use crate::graph::{MultiDigraph, SourceEdge};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `v0 -> v1 -> v2 -> ...`
    Ray,
    /// `v0 <- v1 <- v2 <- ...`
    ReverseRay,
    /// `u0 <-> u1 <-> u2 <-> ...`
    SymmetricRay,
    /// `... -> -1 -> 0 -> 1 -> ...`, enumerated `0, 1, -1, 2, -2, ...`.
    ZChain,
    /// A centre `c` with an edge to every leaf `l1, l2, ...`.
    OutStar,
    /// Symmetric rays `a0 a1 ...` and `b0 b1 ...` with edges `a_t -> b_t`.
    /// `a_t` is vertex `2t`, `b_t` is `2t + 1`.
    TwinRays,
    /// A symmetric ray `u0 u1 ...` dominated by `w`, which sends an edge to
    /// every `u_t`. `w` is vertex 0 and `u_t` is `t + 1`.
    DominatedRay,
    /// Directed `k`-cycles `c{t}_0 -> ... -> c{t}_{k-1} -> c{t}_0` strung on
    /// a symmetric spine `c{t}_0 <-> c{t+1}_0`. `c{t}_{i}` is vertex `tk + i`.
    Necklace(usize),
}

pub const BUILTIN_NAMES: &[&str] = &[
    "ray",
    "reverse-ray",
    "symmetric-ray",
    "zchain",
    "outstar",
    "twin-rays",
    "dominated-ray",
    "necklace",
];

/// Looks up a builtin by name. `necklace` takes the bead size `k`
/// (default 3), either as a parameter or written `necklace(k)`.
pub fn make_builtin(name: &str, params: &[(&str, &str)]) -> Result<Builtin, SourceError> {
    let name = name.trim();
    let (name, inline) = match name.strip_suffix(')').and_then(|r| r.split_once('(')) {
        Some((n, a)) => (n, Some(a.trim())),
        None => (name, None),
    };
    let mut k = inline;
    for &(key, value) in params {
        if name == "necklace" && key == "k" && k.is_none() {
            k = Some(value);
        } else {
            return Err(SourceError::BadParams(format!("unexpected parameter `{key}`")));
        }
    }
    let b = match name {
        "ray" => Builtin::Ray,
        "reverse-ray" => Builtin::ReverseRay,
        "symmetric-ray" => Builtin::SymmetricRay,
        "zchain" => Builtin::ZChain,
        "outstar" => Builtin::OutStar,
        "twin-rays" => Builtin::TwinRays,
        "dominated-ray" => Builtin::DominatedRay,
        "necklace" => {
            let k = match k {
                None => 3,
                Some(a) => a
                    .parse::<usize>()
                    .map_err(|_| SourceError::BadParams(format!("bead size `{a}`")))?,
            };
            if k < 2 {
                return Err(SourceError::BadParams(format!("bead size {k} < 2")));
            }
            return Ok(Builtin::Necklace(k));
        }
        _ => return Err(SourceError::UnknownBuiltin(name.to_string())),
    };
    if k.is_some() {
        return Err(SourceError::BadParams(format!("`{name}` takes no parameters")));
    }
    Ok(b)
}

/// Parses `name`, `name(k)` or `name:key=value,...`.
pub fn builtin_from_spec(spec: &str) -> Result<Builtin, SourceError> {
    let Some((name, rest)) = spec.split_once(':') else {
        return make_builtin(spec, &[]);
    };
    let mut params = Vec::new();
    for kv in rest.split(',') {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| SourceError::BadParams(format!("expected key=value, got `{kv}`")))?;
        params.push((k.trim(), v.trim()));
    }
    make_builtin(name, &params)
}

fn zchain_value(v: usize) -> i64 {
    if v % 2 == 1 {
        (v as i64 + 1) / 2
    } else {
        -(v as i64 / 2)
    }
}

fn zchain_index(z: i64) -> usize {
    if z > 0 {
        (2 * z - 1) as usize
    } else {
        (-2 * z) as usize
    }
}

fn fin(k: u64) -> Cardinality {
    Cardinality::Finite(k)
}

impl Builtin {
    fn is_acyclic(self) -> bool {
        matches!(
            self,
            Builtin::Ray | Builtin::ReverseRay | Builtin::ZChain | Builtin::OutStar
        )
    }

    /// Edges among the first `n` vertices, unsorted.
    fn arcs(self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match self {
            Builtin::Ray => out.extend((1..n).map(|i| (i - 1, i))),
            Builtin::ReverseRay => out.extend((1..n).map(|i| (i, i - 1))),
            Builtin::SymmetricRay => {
                for i in 1..n {
                    out.push((i - 1, i));
                    out.push((i, i - 1));
                }
            }
            Builtin::ZChain => {
                for v in 0..n {
                    let w = zchain_index(zchain_value(v) + 1);
                    if w < n {
                        out.push((v, w));
                    }
                }
            }
            Builtin::OutStar => out.extend((1..n).map(|i| (0, i))),
            Builtin::TwinRays => {
                for v in 0..n {
                    if v + 2 < n {
                        out.push((v, v + 2));
                        out.push((v + 2, v));
                    }
                    if v % 2 == 0 && v + 1 < n {
                        out.push((v, v + 1));
                    }
                }
            }
            Builtin::DominatedRay => {
                for i in 1..n {
                    out.push((0, i));
                    if i + 1 < n {
                        out.push((i, i + 1));
                        out.push((i + 1, i));
                    }
                }
            }
            Builtin::Necklace(k) => {
                for v in 0..n {
                    let (t, i) = (v / k, v % k);
                    let next = t * k + (i + 1) % k;
                    if next < n {
                        out.push((v, next));
                    }
                    if i == 0 && v + k < n {
                        out.push((v, v + k));
                        out.push((v + k, v));
                    }
                }
            }
        }
        out
    }

    fn edges(self, n: usize) -> Vec<SourceEdge> {
        number_copies(self.arcs(n))
    }

    /// Period and non-periodic prefix of the vertex enumeration.
    fn period(self) -> (usize, usize) {
        match self {
            Builtin::TwinRays => (2, 0),
            Builtin::DominatedRay => (1, 1),
            Builtin::Necklace(k) => (k, 0),
            _ => (1, 0),
        }
    }

    /// Smallest admissible window of at least `n` vertices.
    fn align(self, n: usize) -> usize {
        let (p, off) = self.period();
        let layers = n.saturating_sub(off).div_ceil(p).max(1);
        off + layers * p
    }

    fn window_needed(self, x: &BTreeSet<usize>, requested: usize) -> usize {
        let (p, off) = self.period();
        let need = x.last().map_or(0, |m| m + 1) + 2 * p + off;
        if self.is_acyclic() {
            requested.max(x.last().map_or(0, |m| m + 1)).max(1)
        } else {
            self.align(requested.max(need))
        }
    }

    fn tail_model(self, window: usize) -> TailModel {
        let w = window;
        let e = |t: usize, h: usize| Link::Finite(SourceEdge { tail: t, head: h, copy: 0 });
        let (tails, boundary) = match self {
            Builtin::SymmetricRay => (vec![vec![]], vec![(w - 1, w, e(w - 1, w)), (w, w - 1, e(w, w - 1))]),
            Builtin::TwinRays => {
                // tail A is node w, tail B is node w + 1
                let (a, b) = (w, w + 1);
                (
                    vec![vec!["A"], vec!["B"]],
                    vec![
                        (w - 2, a, e(w - 2, w)),
                        (a, w - 2, e(w, w - 2)),
                        (w - 1, b, e(w - 1, w + 1)),
                        (b, w - 1, e(w + 1, w - 1)),
                        (a, b, Link::Infinite),
                    ],
                )
            }
            Builtin::DominatedRay => (
                vec![vec!["ray"]],
                vec![
                    (w - 1, w, e(w - 1, w)),
                    (w, w - 1, e(w, w - 1)),
                    (0, w, Link::Infinite),
                ],
            ),
            Builtin::Necklace(k) => (
                vec![vec![]],
                vec![(w - k, w, e(w - k, w)), (w, w - k, e(w, w - k))],
            ),
            _ => unreachable!("acyclic builtins have no tail model"),
        };
        TailModel::new(w, &self.edges(w), tails, boundary)
    }

    fn acyclic_view(self, x: &BTreeSet<usize>, window: usize) -> ComponentView {
        let labels: Vec<Option<usize>> = (0..window)
            .map(|v| (!x.contains(&v)).then_some(v))
            .collect();
        let components: BTreeMap<usize, Cardinality> =
            labels.iter().flatten().map(|&v| (v, fin(1))).collect();
        ComponentView {
            separator: x.clone(),
            window,
            labels,
            components,
            count: Cardinality::Infinite,
            beyond: Beyond::FiniteComponents,
            certainty: Certainty::Exact,
        }
    }
}

impl Source for Builtin {
    fn name(&self) -> String {
        match self {
            Builtin::Ray => "ray".into(),
            Builtin::ReverseRay => "reverse-ray".into(),
            Builtin::SymmetricRay => "symmetric-ray".into(),
            Builtin::ZChain => "zchain".into(),
            Builtin::OutStar => "outstar".into(),
            Builtin::TwinRays => "twin-rays".into(),
            Builtin::DominatedRay => "dominated-ray".into(),
            Builtin::Necklace(k) => format!("necklace({k})"),
        }
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn label(&self, v: usize) -> String {
        match *self {
            Builtin::Ray | Builtin::ReverseRay => format!("v{v}"),
            Builtin::SymmetricRay => format!("u{v}"),
            Builtin::ZChain => zchain_value(v).to_string(),
            Builtin::OutStar if v == 0 => "c".into(),
            Builtin::OutStar => format!("l{v}"),
            Builtin::TwinRays if v.is_multiple_of(2) => format!("a{}", v / 2),
            Builtin::TwinRays => format!("b{}", v / 2),
            Builtin::DominatedRay if v == 0 => "w".into(),
            Builtin::DominatedRay => format!("u{}", v - 1),
            Builtin::Necklace(k) => format!("c{}_{}", v / k, v % k),
        }
    }

    fn index_of(&self, label: &str) -> Option<usize> {
        let num = |prefix: &str| -> Option<usize> {
            let rest = label.strip_prefix(prefix)?;
            if rest.is_empty() || (rest.len() > 1 && rest.starts_with('0')) {
                return None;
            }
            rest.parse().ok()
        };
        match *self {
            Builtin::Ray | Builtin::ReverseRay => num("v"),
            Builtin::SymmetricRay => num("u"),
            Builtin::ZChain => {
                let z: i64 = label.parse().ok()?;
                (z.to_string() == label).then(|| zchain_index(z))
            }
            Builtin::OutStar if label == "c" => Some(0),
            Builtin::OutStar => num("l").filter(|&i| i >= 1),
            Builtin::TwinRays => num("a").map(|t| 2 * t).or_else(|| num("b").map(|t| 2 * t + 1)),
            Builtin::DominatedRay if label == "w" => Some(0),
            Builtin::DominatedRay => num("u").map(|t| t + 1),
            Builtin::Necklace(k) => {
                let rest = label.strip_prefix('c')?;
                let (t, i) = rest.split_once('_')?;
                let (t, i): (usize, usize) = (t.parse().ok()?, i.parse().ok()?);
                let v = t * k + i;
                (i < k && self.label(v) == label).then_some(v)
            }
        }
    }

    fn truncation(&self, n: usize) -> MultiDigraph {
        truncation_graph((0..n).map(|v| self.label(v)).collect(), &self.edges(n))
    }

    fn degree(&self, v: usize) -> Answer<Degree> {
        let (i, o) = match *self {
            Builtin::Ray if v == 0 => (fin(0), fin(1)),
            Builtin::ReverseRay if v == 0 => (fin(1), fin(0)),
            Builtin::Ray | Builtin::ReverseRay | Builtin::ZChain => (fin(1), fin(1)),
            Builtin::SymmetricRay if v == 0 => (fin(1), fin(1)),
            Builtin::SymmetricRay => (fin(2), fin(2)),
            Builtin::OutStar if v == 0 => (fin(0), Cardinality::Infinite),
            Builtin::OutStar => (fin(1), fin(0)),
            Builtin::TwinRays => match (v.is_multiple_of(2), v < 2) {
                (true, true) => (fin(1), fin(2)),
                (true, false) => (fin(2), fin(3)),
                (false, true) => (fin(2), fin(1)),
                (false, false) => (fin(3), fin(2)),
            },
            Builtin::DominatedRay if v == 0 => (fin(0), Cardinality::Infinite),
            Builtin::DominatedRay if v == 1 => (fin(2), fin(1)),
            Builtin::DominatedRay => (fin(3), fin(2)),
            Builtin::Necklace(k) if !v.is_multiple_of(k) => (fin(1), fin(1)),
            Builtin::Necklace(_) if v == 0 => (fin(2), fin(2)),
            Builtin::Necklace(_) => (fin(3), fin(3)),
        };
        Answer::exact(Degree {
            in_degree: i,
            out_degree: o,
        })
    }

    fn components(&self, x: &BTreeSet<usize>, window: usize) -> Result<ComponentView, SourceError> {
        let w = self.window_needed(x, window);
        Ok(if self.is_acyclic() {
            self.acyclic_view(x, w)
        } else {
            self.tail_model(w).view(x)
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
        let reach = |e: Endpoint| match e {
            Endpoint::Vertex(v) | Endpoint::Component(v) => v + 1,
        };
        let w = self.window_needed(x, reach(from).max(reach(to)));
        if self.is_acyclic() {
            let view = self.acyclic_view(x, w);
            check_endpoint(&view, from)?;
            check_endpoint(&view, to)?;
            let (a, b) = match (from, to) {
                (Endpoint::Vertex(a) | Endpoint::Component(a), Endpoint::Vertex(b) | Endpoint::Component(b)) => (a, b),
            };
            let edges = self
                .edges(w)
                .into_iter()
                .filter(|e| e.tail == a && e.head == b)
                .collect();
            return Ok(Answer::exact(Bundle::Finite(edges)));
        }
        let model = self.tail_model(w);
        let view = model.view(x);
        check_endpoint(&view, from)?;
        check_endpoint(&view, to)?;
        Ok(Answer::exact(model.bundle(x, from, to)))
    }

    fn reach_cut(&self, v: usize) -> Result<Answer<ReachCut>, SourceError> {
        let cut = match *self {
            Builtin::Ray => ReachCut {
                spans_all: v == 0,
                inbound: fin(u64::from(v != 0)),
            },
            Builtin::ReverseRay | Builtin::ZChain => ReachCut {
                spans_all: false,
                inbound: fin(1),
            },
            Builtin::OutStar => ReachCut {
                spans_all: v == 0,
                inbound: fin(u64::from(v != 0)),
            },
            _ => {
                let w = self.window_needed(&BTreeSet::from([v]), 0);
                self.tail_model(w).reach(v)
            }
        };
        Ok(Answer::exact(cut))
    }

    fn parts(&self) -> Vec<String> {
        match self {
            Builtin::TwinRays => vec!["A".into(), "B".into()],
            Builtin::DominatedRay => vec!["ray".into()],
            _ => Vec::new(),
        }
    }

    fn in_part(&self, part: &str, v: usize) -> bool {
        match (self, part) {
            (Builtin::TwinRays, "A") => v.is_multiple_of(2),
            (Builtin::TwinRays, "B") => v % 2 == 1,
            (Builtin::DominatedRay, "ray") => v >= 1,
            _ => false,
        }
    }

    fn meets_infinitely(
        &self,
        x: &BTreeSet<usize>,
        component: usize,
        set: &VertexSet,
    ) -> Result<Answer<bool>, SourceError> {
        let w = self.window_needed(x, component + 1);
        if self.is_acyclic() {
            if x.contains(&component) {
                return Err(SourceError::UnknownComponent(component));
            }
            return Ok(Answer::exact(false));
        }
        self.tail_model(w)
            .meets(x, component, set)
            .map(Answer::exact)
            .ok_or(SourceError::UnknownComponent(component))
    }

    fn window_for(&self, depth: usize) -> usize {
        let x: BTreeSet<usize> = (0..depth).collect();
        self.window_needed(&x, depth)
    }
}
