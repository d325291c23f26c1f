use super::EndspaceError;
use crate::sources::{Beyond, Certainty, ComponentView, Source, VertexSet};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RankOutcome {
    Rank { rank: usize },
    NoRankUpTo { r_max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RankReason {
    /// The digraph or component is finite.
    Finite,
    /// Meets the set with this index in finitely many vertices.
    MissesSet { set: usize },
    /// Removing a separator leaves only components of smaller rank.
    Split { witness: RankWitness },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentRank {
    pub component: usize,
    pub rank: usize,
    pub reason: RankReason,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankWitness {
    /// Everything removed so far, this separator included.
    pub removed: Vec<usize>,
    pub separator: Vec<usize>,
    /// Components meeting the window; the ones beyond it are all finite
    /// when `finite_beyond_window` is set.
    pub components: Vec<ComponentRank>,
    pub finite_beyond_window: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub outcome: RankOutcome,
    pub reason: Option<RankReason>,
    pub certainty: Certainty,
}

type Key = (Vec<usize>, Option<usize>, usize);

struct Searcher<'a> {
    s: &'a dyn Source,
    sets: &'a [VertexSet],
    sep_bound: usize,
    depth: usize,
    window: usize,
    certainty: Certainty,
    views: HashMap<Vec<usize>, ComponentView>,
    memo: HashMap<Key, Option<(usize, RankReason)>>,
}

impl Searcher<'_> {
    fn view(&mut self, y: &BTreeSet<usize>) -> Result<ComponentView, EndspaceError> {
        let key: Vec<usize> = y.iter().copied().collect();
        if let Some(v) = self.views.get(&key) {
            return Ok(v.clone());
        }
        let v = self.s.components(y, self.window)?;
        self.certainty = self.certainty.and(v.certainty);
        self.views.insert(key, v.clone());
        Ok(v)
    }

    /// Rank 0: `comp` (the whole digraph when `None`) is finite or misses
    /// some set almost entirely.
    fn rank_zero(&mut self, y: &BTreeSet<usize>, comp: Option<usize>) -> Result<Option<RankReason>, EndspaceError> {
        let Some(c) = comp else {
            if self.s.order().is_some() {
                return Ok(Some(RankReason::Finite));
            }
            return Ok(self
                .sets
                .iter()
                .position(|u| matches!(u, VertexSet::Finite(_)))
                .map(|set| RankReason::MissesSet { set }));
        };
        let view = self.view(y)?;
        if view.components.get(&c).is_some_and(|s| s.is_finite()) {
            return Ok(Some(RankReason::Finite));
        }
        for (set, u) in self.sets.iter().enumerate() {
            let meets = self.s.meets_infinitely(y, c, u)?;
            self.certainty = self.certainty.and(meets.certainty);
            if !meets.value {
                return Ok(Some(RankReason::MissesSet { set }));
            }
        }
        Ok(None)
    }

    /// Smallest rank `<= cap` that can be certified, with its reason.
    fn rank_at_most(
        &mut self,
        y: &BTreeSet<usize>,
        comp: Option<usize>,
        cap: usize,
    ) -> Result<Option<(usize, RankReason)>, EndspaceError> {
        let key = (y.iter().copied().collect(), comp, cap);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let mut result = self.rank_zero(y, comp)?.map(|r| (0, r));
        if result.is_none() {
            for r in 1..=cap {
                if let Some(w) = self.split(y, comp, r)? {
                    result = Some((r, RankReason::Split { witness: w }));
                    break;
                }
            }
        }
        self.memo.insert(key, result.clone());
        Ok(result)
    }

    fn candidates(&mut self, y: &BTreeSet<usize>, comp: Option<usize>) -> Result<Vec<usize>, EndspaceError> {
        let view = self.view(y)?;
        Ok((0..self.depth)
            .filter(|v| !y.contains(v))
            .filter(|&v| comp.is_none() || view.component_of(v) == comp)
            .collect())
    }

    /// A separator inside `comp` after which every piece of `comp` has rank
    /// below `r`.
    fn split(&mut self, y: &BTreeSet<usize>, comp: Option<usize>, r: usize) -> Result<Option<RankWitness>, EndspaceError> {
        let candidates = self.candidates(y, comp)?;
        let parent = self.view(y)?;
        let smallest = usize::from(comp.is_some());
        for size in smallest..=self.sep_bound.min(candidates.len()) {
            for x in subsets(&candidates, size) {
                if let Some(w) = self.try_separator(y, comp, &parent, &x, r)? {
                    return Ok(Some(w));
                }
            }
        }
        Ok(None)
    }

    fn try_separator(
        &mut self,
        y: &BTreeSet<usize>,
        comp: Option<usize>,
        parent: &ComponentView,
        x: &[usize],
        r: usize,
    ) -> Result<Option<RankWitness>, EndspaceError> {
        let mut z = y.clone();
        z.extend(x.iter().copied());
        let view = self.view(&z)?;
        if view.beyond == Beyond::Unknown {
            return Ok(None);
        }
        let pieces: Vec<usize> = view
            .components
            .keys()
            .copied()
            .filter(|&id| comp.is_none() || parent.component_of(id) == comp)
            .collect();
        let mut components = Vec::with_capacity(pieces.len());
        for id in pieces {
            match self.rank_at_most(&z, Some(id), r - 1)? {
                Some((rank, reason)) => components.push(ComponentRank {
                    component: id,
                    rank,
                    reason,
                }),
                None => return Ok(None),
            }
        }
        Ok(Some(RankWitness {
            removed: z.iter().copied().collect(),
            separator: x.to_vec(),
            components,
            finite_beyond_window: view.beyond == Beyond::FiniteComponents,
        }))
    }
}

/// `k`-subsets of `items` in lexicographic order.
fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Bounded search for the rank of the digraph relative to `sets`.
///
/// Separators are drawn from the first `depth` vertices, at most
/// `sep_bound` new vertices per step, tried by size and then
/// lexicographically. Ranks above `r_max` are reported as `NoRankUpTo`.
pub fn rank_search(
    s: &dyn Source,
    sets: &[VertexSet],
    r_max: usize,
    sep_bound: usize,
    depth: usize,
) -> Result<RankResult, EndspaceError> {
    let mut searcher = Searcher {
        s,
        sets,
        sep_bound,
        depth,
        window: s.window_for(depth),
        certainty: Certainty::Exact,
        views: HashMap::new(),
        memo: HashMap::new(),
    };
    let found = searcher.rank_at_most(&BTreeSet::new(), None, r_max)?;
    let (outcome, reason) = match found {
        Some((rank, reason)) => (RankOutcome::Rank { rank }, Some(reason)),
        None => (RankOutcome::NoRankUpTo { r_max }, None),
    };
    Ok(RankResult {
        outcome,
        reason,
        certainty: searcher.certainty,
    })
}

/// Whether removing `separator` leaves only components of rank below `r`,
/// each certified by the same bounded search.
pub fn verify_rank_witness(
    s: &dyn Source,
    sets: &[VertexSet],
    separator: &[usize],
    r: usize,
    sep_bound: usize,
    depth: usize,
) -> Result<bool, EndspaceError> {
    if r == 0 {
        return Ok(false);
    }
    let mut searcher = Searcher {
        s,
        sets,
        sep_bound,
        depth: depth.max(separator.iter().max().map_or(0, |m| m + 1)),
        window: s.window_for(depth),
        certainty: Certainty::Exact,
        views: HashMap::new(),
        memo: HashMap::new(),
    };
    let parent = searcher.view(&BTreeSet::new())?;
    Ok(searcher
        .try_separator(&BTreeSet::new(), None, &parent, separator, r)?
        .is_some())
}

impl RankResult {
    pub fn rank(&self) -> Option<usize> {
        match self.outcome {
            RankOutcome::Rank { rank } => Some(rank),
            RankOutcome::NoRankUpTo { .. } => None,
        }
    }
}
