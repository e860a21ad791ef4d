//! The reactant → product atom correspondence built up by the pipeline.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{NodeId, UnifiedGraph};

/// How a pair entered the mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Found by the common sub-graph search in the given 1-based iteration.
    Conserved {
        iteration: usize,
    },
    Similarity,
    PathRefined,
    HydrogenSwapped,
}

impl Provenance {
    pub fn is_conserved(self) -> bool {
        matches!(self, Provenance::Conserved { .. })
    }
}

/// An injective partial map from reactant nodes to product nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomMapping {
    forward: BTreeMap<NodeId, (NodeId, Provenance)>,
    reverse: BTreeMap<NodeId, NodeId>,
    reactant_count: usize,
    product_count: usize,
}

impl AtomMapping {
    pub fn new(reactant_count: usize, product_count: usize) -> AtomMapping {
        AtomMapping {
            forward: BTreeMap::new(),
            reverse: BTreeMap::new(),
            reactant_count,
            product_count,
        }
    }

    pub fn for_graphs(reactants: &UnifiedGraph, products: &UnifiedGraph) -> AtomMapping {
        AtomMapping::new(reactants.len(), products.len())
    }

    /// Adds a pair. Panics if either node is already mapped.
    pub fn insert(&mut self, r: NodeId, p: NodeId, provenance: Provenance) {
        assert!(
            !self.forward.contains_key(&r) && !self.reverse.contains_key(&p),
            "mapping must stay injective ({r} -> {p})"
        );
        self.forward.insert(r, (p, provenance));
        self.reverse.insert(p, r);
    }

    /// Removes the pair of reactant node `r`, returning its image.
    pub fn remove(&mut self, r: NodeId) -> Option<(NodeId, Provenance)> {
        let entry = self.forward.remove(&r)?;
        self.reverse.remove(&entry.0);
        Some(entry)
    }

    pub fn image(&self, r: NodeId) -> Option<NodeId> {
        self.forward.get(&r).map(|e| e.0)
    }

    pub fn preimage(&self, p: NodeId) -> Option<NodeId> {
        self.reverse.get(&p).copied()
    }

    pub fn provenance(&self, r: NodeId) -> Option<Provenance> {
        self.forward.get(&r).map(|e| e.1)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// `(reactant, product, provenance)` in ascending reactant order.
    pub fn pairs(&self) -> impl Iterator<Item = (NodeId, NodeId, Provenance)> + '_ {
        self.forward.iter().map(|(&r, &(p, prov))| (r, p, prov))
    }

    pub fn conserved_count(&self) -> usize {
        self.forward.values().filter(|e| e.1.is_conserved()).count()
    }

    pub fn unmapped_reactants(&self) -> Vec<NodeId> {
        (0..self.reactant_count)
            .map(NodeId)
            .filter(|v| !self.forward.contains_key(v))
            .collect()
    }

    pub fn unmapped_products(&self) -> Vec<NodeId> {
        (0..self.product_count)
            .map(NodeId)
            .filter(|v| !self.reverse.contains_key(v))
            .collect()
    }

    pub fn reactant_count(&self) -> usize {
        self.reactant_count
    }

    pub fn product_count(&self) -> usize {
        self.product_count
    }
}
