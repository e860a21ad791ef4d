//! Attributed molecular graphs.
//!
//! A [`UnifiedGraph`] is the disjoint union of the molecules on one side of
//! a reaction. Nodes are numbered by a cumulative offset: molecule 1 keeps
//! positions `1..=n1`, molecule 2 follows at `n1 + 1`, and so on.

mod centrality;
mod dot;
mod features;
mod paths;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::lammps::SystemTopology;

pub use centrality::{eigenvector_centrality, CENTRALITY_MAX_ITERATIONS, CENTRALITY_TOLERANCE};
pub use dot::{mapping_to_dot, to_dot, NodeClass};
pub use features::{enumerate_features, Feature, FeatureSet};
pub use paths::{eccentricity_within_component, shortest_path_distances, ShellIndex};

/// Index of a node inside a [`UnifiedGraph`]. The 1-based global id is
/// `index + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn global_id(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.global_id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Reactant,
    Product,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Reactant => "reactant",
            Side::Product => "product",
        })
    }
}

/// Masses are compared on a 1e-4 amu grid.
pub const MASS_RESOLUTION: f64 = 1e-4;

/// Matching key of a node: atom type and mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomLabel {
    pub type_id: usize,
    pub mass_key: i64,
}

pub fn mass_key(mass: f64) -> i64 {
    (mass / MASS_RESOLUTION).round() as i64
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomNode {
    /// Atom id in the originating data file.
    pub source_id: usize,
    /// 1-based index of the originating molecule.
    pub component: usize,
    pub mass: f64,
    pub type_id: usize,
    pub charge: f64,
    pub position: [f64; 3],
}

impl AtomNode {
    pub fn label(&self) -> AtomLabel {
        AtomLabel {
            type_id: self.type_id,
            mass_key: mass_key(self.mass),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{side} molecule {index} has no atoms")]
    EmptyTopology { side: Side, index: usize },
    #[error("{side} molecule {component}: atom {atom} is bonded to itself")]
    SelfLoop { side: Side, component: usize, atom: usize },
    #[error("{side} molecule {component} has no bonds, centrality is undefined")]
    NoEdges { side: Side, component: usize },
    #[error("power iteration did not converge within {0} iterations")]
    NotConverged(usize),
}

#[derive(Debug, Clone)]
pub struct UnifiedGraph {
    side: Side,
    nodes: Vec<AtomNode>,
    adjacency: Vec<Vec<NodeId>>,
    edges: Vec<(NodeId, NodeId)>,
    components: Vec<Vec<NodeId>>,
    lookup: HashMap<(usize, usize), NodeId>,
    type_labels: HashMap<usize, String>,
}

impl UnifiedGraph {
    /// Builds the unified graph of one side of a reaction. Molecule `k`
    /// (1-based) of `topologies` becomes component `k`.
    pub fn build(topologies: &[SystemTopology], side: Side) -> Result<UnifiedGraph, GraphError> {
        let mut g = UnifiedGraph {
            side,
            nodes: Vec::new(),
            adjacency: Vec::new(),
            edges: Vec::new(),
            components: Vec::new(),
            lookup: HashMap::new(),
            type_labels: HashMap::new(),
        };
        for (i, topo) in topologies.iter().enumerate() {
            let component = i + 1;
            if topo.atoms.is_empty() {
                return Err(GraphError::EmptyTopology { side, index: component });
            }
            let mut members = Vec::with_capacity(topo.atoms.len());
            for atom in &topo.atoms {
                let id = NodeId(g.nodes.len());
                g.lookup.insert((component, atom.id), id);
                members.push(id);
                g.nodes.push(AtomNode {
                    source_id: atom.id,
                    component,
                    mass: topo.mass_of(atom),
                    type_id: atom.type_id,
                    charge: atom.charge,
                    position: atom.position,
                });
                g.adjacency.push(Vec::new());
            }
            for (t, label) in &topo.type_labels {
                g.type_labels.entry(*t).or_insert_with(|| label.clone());
            }
            for bond in &topo.bonds {
                let [a, b] = bond.atoms;
                if a == b {
                    return Err(GraphError::SelfLoop {
                        side,
                        component,
                        atom: a,
                    });
                }
                let u = g.lookup[&(component, a)];
                let v = g.lookup[&(component, b)];
                if !g.adjacency[u.0].contains(&v) {
                    g.adjacency[u.0].push(v);
                    g.adjacency[v.0].push(u);
                    g.edges.push((u.min(v), u.max(v)));
                }
            }
            g.components.push(members);
        }
        for list in &mut g.adjacency {
            list.sort_unstable();
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, v: NodeId) -> &AtomNode {
        &self.nodes[v.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn label(&self, v: NodeId) -> AtomLabel {
        self.nodes[v.0].label()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v.0].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u.0].binary_search(&v).is_ok()
    }

    /// Unordered edges as `(low, high)` pairs, sorted.
    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Members of a 1-based component, in ascending order.
    pub fn component(&self, component: usize) -> &[NodeId] {
        &self.components[component - 1]
    }

    pub fn component_of(&self, v: NodeId) -> usize {
        self.nodes[v.0].component
    }

    /// Node for atom `source_id` of molecule `component`.
    pub fn node_for(&self, component: usize, source_id: usize) -> Option<NodeId> {
        self.lookup.get(&(component, source_id)).copied()
    }

    /// Force-field name of an atom type, if the data file carried one.
    pub fn type_label(&self, type_id: usize) -> Option<&str> {
        self.type_labels.get(&type_id).map(String::as_str)
    }
}

/// See [`UnifiedGraph::build`].
pub fn build_unified_graph(topologies: &[SystemTopology], side: Side) -> Result<UnifiedGraph, GraphError> {
    UnifiedGraph::build(topologies, side)
}

#[cfg(test)]
pub(crate) mod testing {
    use std::collections::BTreeMap;

    use crate::lammps::{AtomRecord, Interaction, SystemTopology, TypeCounts};

    /// A topology with `types.len()` atoms, masses equal to `10 * type`, and
    /// the given 1-based bonds.
    pub fn topology(types: &[usize], bonds: &[(usize, usize)]) -> SystemTopology {
        let atoms = types
            .iter()
            .enumerate()
            .map(|(i, &t)| AtomRecord {
                id: i + 1,
                molecule: 1,
                type_id: t,
                charge: 0.0,
                position: [i as f64, 0.0, 0.0],
            })
            .collect();
        let masses: BTreeMap<usize, f64> = types.iter().map(|&t| (t, 10.0 * t as f64)).collect();
        SystemTopology {
            title: "test".into(),
            atoms,
            masses,
            type_labels: BTreeMap::new(),
            bonds: bonds
                .iter()
                .map(|&(a, b)| Interaction {
                    type_id: 1,
                    atoms: [a, b],
                })
                .collect(),
            angles: vec![],
            dihedrals: vec![],
            impropers: vec![],
            bounds: [[0.0, 1.0]; 3],
            type_counts: TypeCounts::default(),
        }
    }

    pub fn path(n: usize) -> SystemTopology {
        let bonds: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        topology(&vec![1; n], &bonds)
    }

    pub fn cycle(n: usize) -> SystemTopology {
        let mut bonds: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        bonds.push((n, 1));
        topology(&vec![1; n], &bonds)
    }
}
