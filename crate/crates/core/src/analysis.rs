//! What changed across the reaction: bond deltas, centrality shifts, the
//! two initiator atoms, and the atoms that appear or disappear.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{eigenvector_centrality, GraphError, NodeId, UnifiedGraph};
use crate::mapping::{AtomMapping, Provenance};

pub const DEFAULT_CENTRALITY_WEIGHT: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("no bond changes between reactants and products")]
    NoReactionDetected,
    #[error("bond changes span {components} reactant molecules, exactly 2 are supported")]
    UnsupportedReaction { components: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A neighbor in a bond delta, expressed on the reactant side where
/// possible. Product atoms without a preimage are created atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DeltaNeighbor {
    Reactant(NodeId),
    Created(NodeId),
}

/// Symmetric difference between a reactant atom's neighbors and its
/// image's neighbors pulled back through the mapping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BondDelta {
    pub gained: Vec<DeltaNeighbor>,
    pub lost: Vec<NodeId>,
}

impl BondDelta {
    pub fn len(&self) -> usize {
        self.gained.len() + self.lost.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn bond_delta(r: NodeId, m: &AtomMapping, g_r: &UnifiedGraph, g_p: &UnifiedGraph) -> BondDelta {
    let p = m.image(r).expect("bond_delta needs a mapped atom");
    let before: BTreeSet<DeltaNeighbor> = g_r.neighbors(r).iter().map(|&u| DeltaNeighbor::Reactant(u)).collect();
    let after: BTreeSet<DeltaNeighbor> = g_p
        .neighbors(p)
        .iter()
        .map(|&y| match m.preimage(y) {
            Some(u) => DeltaNeighbor::Reactant(u),
            None => DeltaNeighbor::Created(y),
        })
        .collect();
    BondDelta {
        gained: after.difference(&before).copied().collect(),
        lost: before
            .difference(&after)
            .map(|d| match d {
                DeltaNeighbor::Reactant(u) => *u,
                DeltaNeighbor::Created(_) => unreachable!("reactant neighbors are never created"),
            })
            .collect(),
    }
}

/// Unit-norm eigenvector centrality of every node, computed per molecule.
/// Atoms of molecules without bonds get 0.
pub fn centralities(g: &UnifiedGraph) -> Result<Vec<f64>, GraphError> {
    let mut out = vec![0.0; g.len()];
    for c in 1..=g.component_count() {
        match eigenvector_centrality(g, c) {
            Ok(values) => {
                for (v, x) in values {
                    out[v.0] = x;
                }
            }
            Err(GraphError::NoEdges { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn centrality_delta(r: NodeId, p: NodeId, c_r: &[f64], c_p: &[f64]) -> f64 {
    (c_p[p.0] - c_r[r.0]).abs()
}

/// Analysis of one mapped pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairChange {
    pub reactant: NodeId,
    pub product: NodeId,
    pub provenance: Provenance,
    pub delta_e: BondDelta,
    pub delta_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionReport {
    pub pairs: Vec<PairChange>,
    /// Reactant atoms, ascending.
    pub initiators: [NodeId; 2],
    pub created: Vec<NodeId>,
    pub deleted: Vec<NodeId>,
    pub centrality_weight: f64,
}

impl ReactionReport {
    /// Pairs whose bonding changed.
    pub fn changed(&self) -> impl Iterator<Item = &PairChange> {
        self.pairs.iter().filter(|c| !c.delta_e.is_empty())
    }

    pub fn change_of(&self, r: NodeId) -> Option<&PairChange> {
        self.pairs.iter().find(|c| c.reactant == r)
    }
}

/// `(created, deleted)`: product atoms without a preimage and reactant
/// atoms without an image.
pub fn classify_created_deleted(m: &AtomMapping) -> (Vec<NodeId>, Vec<NodeId>) {
    (m.unmapped_products(), m.unmapped_reactants())
}

/// Picks one atom per reacting reactant molecule, maximizing
/// `|dE| + weight * dC / max(dC)`, smallest id on ties.
pub fn select_initiators(
    changes: &[PairChange],
    g_r: &UnifiedGraph,
    weight: f64,
) -> Result<[NodeId; 2], AnalysisError> {
    let candidates: Vec<&PairChange> = changes.iter().filter(|c| !c.delta_e.is_empty()).collect();
    let components: BTreeSet<usize> = candidates.iter().map(|c| g_r.component_of(c.reactant)).collect();
    match components.len() {
        0 => return Err(AnalysisError::NoReactionDetected),
        2 => {}
        n => return Err(AnalysisError::UnsupportedReaction { components: n }),
    }
    let max_dc = candidates.iter().map(|c| c.delta_c).fold(0.0, f64::max);
    let combined = |c: &PairChange| {
        let dc = if max_dc > 0.0 { c.delta_c / max_dc } else { 0.0 };
        c.delta_e.len() as f64 + weight * dc
    };
    let mut picked = Vec::with_capacity(2);
    for component in components {
        let mut best: Option<(&PairChange, f64)> = None;
        for &c in candidates.iter().filter(|c| g_r.component_of(c.reactant) == component) {
            let score = combined(c);
            if best.is_none_or(|(b, s)| score > s || (score == s && c.reactant < b.reactant)) {
                best = Some((c, score));
            }
        }
        picked.push(best.expect("component has candidates").0.reactant);
    }
    picked.sort_unstable();
    Ok([picked[0], picked[1]])
}

pub fn analyze_reaction(
    m: &AtomMapping,
    g_r: &UnifiedGraph,
    g_p: &UnifiedGraph,
    centrality_weight: f64,
) -> Result<ReactionReport, AnalysisError> {
    let c_r = centralities(g_r)?;
    let c_p = centralities(g_p)?;
    let pairs: Vec<PairChange> = m
        .pairs()
        .map(|(r, p, provenance)| PairChange {
            reactant: r,
            product: p,
            provenance,
            delta_e: bond_delta(r, m, g_r, g_p),
            delta_c: centrality_delta(r, p, &c_r, &c_p),
        })
        .collect();
    let initiators = select_initiators(&pairs, g_r, centrality_weight)?;
    let (created, deleted) = classify_created_deleted(m);
    Ok(ReactionReport {
        pairs,
        initiators,
        created,
        deleted,
        centrality_weight,
    })
}
