//! The chain of quotients `D / P_{X_n}` and the bonding maps between them.

mod bonding;
mod dot;
mod level;
mod verify;

pub use bonding::{bonding, BondingMap, EdgeImage};
pub use dot::export_dot;
pub use level::{
    level, level_in_window, Class, ClassKind, QuotientLevel, DEFAULT_EDGE_BOUND,
};
pub use verify::{verify_levels, verify_system, Item, LawViolation, SystemReport};

use crate::graph::SourceEdge;
use crate::sources::{Certainty, SolidityReport, Source, SourceError};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("D - X_{n} has infinitely many strong components")]
    NonSolidAtLevel { n: usize, report: SolidityReport },
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error("level {n} has more than {bound} edges")]
    TooManyEdges { n: usize, bound: usize },
    #[error("level {n} exceeds the {order} vertices of the source")]
    BeyondOrder { n: usize, order: usize },
    #[error("no bonding map from level {from} to the finer level {to}")]
    LevelOrder { from: usize, to: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// Levels `0..=depth` computed through one shared window, so that class
/// lookups agree across the chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientChain {
    pub window: usize,
    pub levels: Vec<QuotientLevel>,
}

impl QuotientChain {
    pub fn build(s: &dyn Source, depth: usize) -> Result<QuotientChain, QuotientError> {
        Self::build_with_bound(s, depth, DEFAULT_EDGE_BOUND)
    }

    pub fn build_with_bound(
        s: &dyn Source,
        depth: usize,
        edge_bound: usize,
    ) -> Result<QuotientChain, QuotientError> {
        let window = s.window_for(depth);
        let levels = (0..=depth)
            .map(|n| level_in_window(s, n, window, edge_bound))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QuotientChain { window, levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn bonding(&self, n: usize, m: usize) -> Result<BondingMap, QuotientError> {
        BondingMap::between(&self.levels[n], &self.levels[m])
    }

    pub fn certainty(&self) -> Certainty {
        self.levels
            .iter()
            .map(|l| l.certainty)
            .min()
            .unwrap_or(Certainty::Exact)
    }
}

/// Serializes pairs as a JSON object, keeping their order.
struct OrderedMap<'a>(&'a [(String, String)]);

impl Serialize for OrderedMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    tail: &'a str,
    head: &'a str,
    kind: crate::graph::EdgeKind,
    origin: Option<SourceEdge>,
}

#[derive(Serialize)]
struct LevelJson<'a> {
    n: usize,
    classes: &'a [Class],
    edges: Vec<EdgeJson<'a>>,
    class_of: OrderedMap<'a>,
    certainty: Certainty,
}

/// JSON object with keys `n`, `classes`, `edges`, `class_of`, `certainty`.
/// `class_of` maps vertex labels of the window to class ids.
pub fn level_json(level: &QuotientLevel, s: &dyn Source) -> serde_json::Value {
    let class_of: Vec<(String, String)> = level
        .class_of
        .iter()
        .enumerate()
        .map(|(v, &c)| (s.label(v), level.classes[c].id.clone()))
        .collect();
    let edges = level
        .graph
        .edges()
        .iter()
        .map(|e| EdgeJson {
            tail: &level.classes[e.tail.0].id,
            head: &level.classes[e.head.0].id,
            kind: e.kind,
            origin: e.origin,
        })
        .collect();
    let json = LevelJson {
        n: level.n,
        classes: &level.classes,
        edges,
        class_of: OrderedMap(&class_of),
        certainty: level.certainty,
    };
    serde_json::to_value(json).expect("level serializes")
}
