use super::{BondingMap, EdgeImage, QuotientChain, QuotientError, QuotientLevel};
use crate::graph::EdgeId;
use crate::sources::{Certainty, Source};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Item {
    Class(usize),
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LawViolation {
    /// `f_nn` moves a class or an edge.
    Identity { n: usize, item: Item },
    /// `f_nm` differs from `f_jm . f_nj` at `item` of level `n`, or one
    /// side has no image there.
    Composition {
        n: usize,
        j: usize,
        m: usize,
        item: Item,
        direct: Option<EdgeImage>,
        composed: Option<EdgeImage>,
    },
    /// `item` of level `m` has no preimage in level `n`.
    Surjectivity { n: usize, m: usize, item: Item },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub levels: usize,
    pub maps_checked: usize,
    pub violation: Option<LawViolation>,
    pub certainty: Certainty,
}

impl SystemReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the identity, composition and surjectivity laws on every pair
/// and triple of the given levels, stopping at the first violation.
pub fn verify_levels(levels: &[QuotientLevel]) -> Result<SystemReport, QuotientError> {
    let n_levels = levels.len();
    let mut maps: Vec<Vec<BondingMap>> = Vec::with_capacity(n_levels);
    for n in 0..n_levels {
        let row = (0..=n)
            .map(|m| BondingMap::between(&levels[n], &levels[m]))
            .collect::<Result<Vec<_>, _>>()?;
        maps.push(row);
    }
    let certainty = levels
        .iter()
        .map(|l| l.certainty)
        .min()
        .unwrap_or(Certainty::Exact);
    let maps_checked = n_levels * (n_levels + 1) / 2;
    let report = |violation| SystemReport {
        levels: n_levels,
        maps_checked,
        violation,
        certainty,
    };

    for n in 0..n_levels {
        let f = &maps[n][n];
        if let Some(c) = f.vertex_map.iter().enumerate().position(|(i, &c)| i != c) {
            return Ok(report(Some(LawViolation::Identity { n, item: Item::Class(c) })));
        }
        if let Some(e) = (0..f.edge_map.len()).find(|&e| f.edge_map[e] != Some(EdgeImage::Edge(EdgeId(e)))) {
            return Ok(report(Some(LawViolation::Identity { n, item: Item::Edge(e) })));
        }
    }

    for n in 0..n_levels {
        for j in 0..=n {
            for m in 0..=j {
                let (fnm, fnj, fjm) = (&maps[n][m], &maps[n][j], &maps[j][m]);
                for c in 0..levels[n].class_count() {
                    let direct = fnm.vertex_map[c];
                    if fjm.vertex_map[fnj.vertex_map[c]] != direct {
                        return Ok(report(Some(LawViolation::Composition {
                            n,
                            j,
                            m,
                            item: Item::Class(c),
                            direct: Some(EdgeImage::Class(direct)),
                            composed: Some(EdgeImage::Class(fjm.vertex_map[fnj.vertex_map[c]])),
                        })));
                    }
                }
                for e in 0..levels[n].graph.edge_count() {
                    let direct = fnm.edge_map[e];
                    let composed = fnj.edge_map[e].and_then(|img| fjm.apply(img));
                    if direct.is_none() || direct != composed {
                        return Ok(report(Some(LawViolation::Composition {
                            n,
                            j,
                            m,
                            item: Item::Edge(e),
                            direct,
                            composed,
                        })));
                    }
                }
            }
        }
    }

    for n in 0..n_levels {
        for m in 0..=n {
            let f = &maps[n][m];
            let mut hit_class = vec![false; levels[m].class_count()];
            let mut hit_edge = vec![false; levels[m].graph.edge_count()];
            for &c in &f.vertex_map {
                hit_class[c] = true;
            }
            for img in f.edge_map.iter().flatten() {
                if let EdgeImage::Edge(e) = img {
                    hit_edge[e.0] = true;
                }
            }
            if let Some(c) = hit_class.iter().position(|h| !h) {
                return Ok(report(Some(LawViolation::Surjectivity { n, m, item: Item::Class(c) })));
            }
            if let Some(e) = hit_edge.iter().position(|h| !h) {
                return Ok(report(Some(LawViolation::Surjectivity { n, m, item: Item::Edge(e) })));
            }
        }
    }
    Ok(report(None))
}

/// Builds levels `0..=depth` and checks the inverse-system laws on them.
pub fn verify_system(s: &dyn Source, depth: usize) -> Result<SystemReport, QuotientError> {
    let chain = QuotientChain::build(s, depth)?;
    verify_levels(&chain.levels)
}
