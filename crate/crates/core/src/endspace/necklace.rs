use super::EndspaceError;
use crate::graph::{strong_components, MultiDigraph, VertexId};
use crate::sources::{Certainty, ComponentView, Source, VertexSet};
use serde::Serialize;
use std::collections::{BTreeSet, VecDeque};

/// A finite initial piece of a necklace: disjoint strongly connected beads,
/// consecutive ones joined by a path in each direction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklacePrefix {
    pub beads: Vec<Vec<usize>>,
    /// `forward[i]` runs from bead `i` to bead `i + 1`.
    pub forward: Vec<Vec<usize>>,
    /// `backward[i]` runs from bead `i + 1` to bead `i`.
    pub backward: Vec<Vec<usize>>,
    pub sets: Vec<VertexSet>,
    /// For each set, the beads meeting it.
    pub attachment: Vec<Vec<usize>>,
    pub certainty: Certainty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NecklaceViolation {
    NotStronglyConnected { bead: usize },
    Overlap { first: usize, second: usize },
    MissingPath { index: usize, direction: Direction },
    BadPath { index: usize, direction: Direction },
    AttachmentMismatch { set: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklaceCheck {
    pub ok: bool,
    pub violation: Option<NecklaceViolation>,
}

/// Greedy bounded search for a necklace attached to `sets`.
///
/// First a nested sequence of infinite components of `D - X_n`, `n <= depth`,
/// each meeting every set infinitely, is chosen (smallest ids first, with
/// backtracking). Beads are then cut from the differences between
/// consecutive members of that sequence: the first strong component of the
/// difference that meets every set becomes the next bead, and consecutive
/// beads are joined by shortest paths avoiding everything used so far.
/// `None` means the search ran out of levels or found no such sequence.
pub fn necklace_search(
    s: &dyn Source,
    sets: &[VertexSet],
    beads: usize,
    depth: usize,
) -> Option<NecklacePrefix> {
    let window = s.window_for(depth);
    let views: Vec<ComponentView> = (0..=depth)
        .map(|n| s.components(&(0..n).collect(), window))
        .collect::<Result<_, _>>()
        .ok()?;
    let chain = nested_chain(s, sets, &views)?;
    let regions: Vec<BTreeSet<usize>> = views
        .iter()
        .zip(&chain)
        .map(|(v, &c)| v.members_in_window(c).into_iter().collect())
        .collect();
    let g = s.truncation(window);
    let meets_all = |set: &[usize]| {
        sets.iter()
            .all(|u| set.iter().any(|&v| u.contains(s, v)))
    };

    let mut used: BTreeSet<usize> = BTreeSet::new();
    let mut found: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    let mut m = 0;
    while found.len() < beads {
        let (bead, next) = (m + 1..=depth).find_map(|m2| {
            let layer: BTreeSet<usize> = regions[m]
                .difference(&regions[m2])
                .filter(|v| !used.contains(v))
                .copied()
                .collect();
            first_component_meeting(&g, &layer, &meets_all).map(|b| (b, m2))
        })?;
        if let Some((prev, region)) = found.last() {
            let area = &regions[*region];
            let target: BTreeSet<usize> = bead.iter().copied().collect();
            let source: BTreeSet<usize> = prev.iter().copied().collect();
            let free = |v: usize| area.contains(&v) && !used.contains(&v) && !target.contains(&v);
            let f = bfs_path(&g, &source, &target, free)?;
            let free = |v: usize| area.contains(&v) && !used.contains(&v) && !source.contains(&v);
            let b = bfs_path(&g, &target, &source, free)?;
            used.extend(f.iter().copied());
            used.extend(b.iter().copied());
            forward.push(f);
            backward.push(b);
        }
        used.extend(bead.iter().copied());
        found.push((bead, m));
        m = next;
    }

    let beads: Vec<Vec<usize>> = found.into_iter().map(|(b, _)| b).collect();
    let attachment = sets
        .iter()
        .map(|u| {
            (0..beads.len())
                .filter(|&i| beads[i].iter().any(|&v| u.contains(s, v)))
                .collect()
        })
        .collect();
    Some(NecklacePrefix {
        beads,
        forward,
        backward,
        sets: sets.to_vec(),
        attachment,
        certainty: views.iter().map(|v| v.certainty).min().unwrap_or(Certainty::Exact),
    })
}

/// Depth-first choice of nested infinite components meeting every set.
fn nested_chain(s: &dyn Source, sets: &[VertexSet], views: &[ComponentView]) -> Option<Vec<usize>> {
    let good = |n: usize, c: usize| {
        let x: BTreeSet<usize> = (0..n).collect();
        sets.iter().all(|u| {
            s.meets_infinitely(&x, c, u)
                .map(|a| a.value)
                .unwrap_or(false)
        })
    };
    let children = |n: usize, parent: Option<usize>| -> Vec<usize> {
        views[n]
            .infinite_components()
            .into_iter()
            .filter(|&c| parent.is_none_or(|p| views[n - 1].component_of(c) == Some(p)))
            .filter(|&c| good(n, c))
            .collect()
    };
    let mut chain: Vec<usize> = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![children(0, None)];
    let mut budget = 10_000usize;
    while let Some(options) = stack.last_mut() {
        budget = budget.checked_sub(1)?;
        if options.is_empty() {
            stack.pop();
            chain.pop();
            continue;
        }
        let c = options.remove(0);
        chain.push(c);
        if chain.len() == views.len() {
            return Some(chain);
        }
        stack.push(children(chain.len(), Some(c)));
    }
    None
}

fn first_component_meeting(
    g: &MultiDigraph,
    layer: &BTreeSet<usize>,
    meets_all: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if layer.is_empty() {
        return None;
    }
    let keep: BTreeSet<VertexId> = layer.iter().map(|&v| VertexId(v)).collect();
    let (h, ids) = g.induced(&keep);
    let sc = strong_components(&h);
    let mut comps: Vec<Vec<usize>> = sc
        .components
        .iter()
        .map(|c| c.iter().map(|v| ids[v.0].0).collect())
        .collect();
    comps.sort();
    comps.into_iter().find(|c| meets_all(c))
}

/// Shortest path from some vertex of `from` to some vertex of `to`; every
/// vertex strictly between them must satisfy `free`.
fn bfs_path(
    g: &MultiDigraph,
    from: &BTreeSet<usize>,
    to: &BTreeSet<usize>,
    free: impl Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &v in from {
        seen[v] = true;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for &e in g.out_edges(VertexId(v)) {
            let h = g.edge(e).head.0;
            if seen[h] {
                continue;
            }
            if to.contains(&h) {
                let mut path = vec![h, v];
                let mut cur = v;
                while let Some(p) = parent[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            if free(h) {
                seen[h] = true;
                parent[h] = Some(v);
                queue.push_back(h);
            }
        }
    }
    None
}

fn fail(v: NecklaceViolation) -> NecklaceCheck {
    NecklaceCheck {
        ok: false,
        violation: Some(v),
    }
}

/// Checks a prefix inside `truncation(depth)`.
pub fn verify_necklace(
    s: &dyn Source,
    p: &NecklacePrefix,
    depth: usize,
) -> Result<NecklaceCheck, EndspaceError> {
    let all = p.beads.iter().chain(&p.forward).chain(&p.backward).flatten();
    if let Some(&top) = all.max() {
        if top >= depth {
            return Err(EndspaceError::DepthExceeded {
                requested: top + 1,
                depth,
            });
        }
    }
    let g = s.truncation(depth);
    for (i, bead) in p.beads.iter().enumerate() {
        let keep: BTreeSet<VertexId> = bead.iter().map(|&v| VertexId(v)).collect();
        let (h, _) = g.induced(&keep);
        if bead.is_empty() || strong_components(&h).len() != 1 {
            return Ok(fail(NecklaceViolation::NotStronglyConnected { bead: i }));
        }
    }
    let mut owner = vec![None; depth];
    for (i, bead) in p.beads.iter().enumerate() {
        for &v in bead {
            if let Some(first) = owner[v] {
                return Ok(fail(NecklaceViolation::Overlap { first, second: i }));
            }
            owner[v] = Some(i);
        }
    }
    let links = p.beads.len().saturating_sub(1);
    for (paths, dir) in [(&p.forward, Direction::Forward), (&p.backward, Direction::Backward)] {
        for index in 0..links {
            let Some(path) = paths.get(index) else {
                return Ok(fail(NecklaceViolation::MissingPath { index, direction: dir }));
            };
            let (a, b) = match dir {
                Direction::Forward => (index, index + 1),
                Direction::Backward => (index + 1, index),
            };
            let ok = path.len() >= 2
                && owner[path[0]] == Some(a)
                && owner[path[path.len() - 1]] == Some(b)
                && path[1..path.len() - 1].iter().all(|&v| owner[v].is_none())
                && path.windows(2).all(|w| {
                    g.out_edges(VertexId(w[0]))
                        .iter()
                        .any(|&e| g.edge(e).head.0 == w[1])
                });
            if !ok {
                return Ok(fail(NecklaceViolation::BadPath { index, direction: dir }));
            }
        }
        if paths.len() > links {
            return Ok(fail(NecklaceViolation::BadPath { index: links, direction: dir }));
        }
    }
    for (k, u) in p.sets.iter().enumerate() {
        let actual: Vec<usize> = (0..p.beads.len())
            .filter(|&i| p.beads[i].iter().any(|&v| u.contains(s, v)))
            .collect();
        if p.attachment.get(k) != Some(&actual) {
            return Ok(fail(NecklaceViolation::AttachmentMismatch { set: k }));
        }
    }
    Ok(NecklaceCheck {
        ok: true,
        violation: None,
    })
}
