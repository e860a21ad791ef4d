//! Cuts the reaction neighborhood out of both sides and writes it as a
//! pre/post template pair plus the equivalence map.
//!
//! Template atoms are numbered 1..N by ascending global id. Deleted atoms
//! live only in the pre template, created atoms only in the post template.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::analysis::{DeltaNeighbor, ReactionReport};
use crate::graph::{shortest_path_distances, NodeId, UnifiedGraph};
use crate::lammps::{Interaction, MapFileError, MoleculeTemplateFile, ReactionMapFile, SystemTopology, TemplateAtom};
use crate::mapping::AtomMapping;

pub const DEFAULT_CUTOFF: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("pruned templates disagree under the mapping: {0}")]
    InconsistentPruning(String),
    #[error(transparent)]
    Map(#[from] MapFileError),
}

/// Nodes within `cutoff` hops of any site, plus `required`.
pub fn prune_to_cutoff(g: &UnifiedGraph, sites: &[NodeId], cutoff: usize, required: &[NodeId]) -> BTreeSet<NodeId> {
    let dist = shortest_path_distances(g, sites);
    let mut kept: BTreeSet<NodeId> = g.nodes().filter(|v| dist[v.0].is_some_and(|d| d <= cutoff)).collect();
    kept.extend(required.iter().copied());
    kept
}

/// Members of `set` bonded to at least one atom outside it.
pub fn mark_edge_atoms(g: &UnifiedGraph, set: &BTreeSet<NodeId>) -> BTreeSet<NodeId> {
    set.iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|u| !set.contains(u)))
        .collect()
}

/// 1-based local index of every member, in ascending global order.
fn local_numbering(set: &BTreeSet<NodeId>) -> BTreeMap<NodeId, usize> {
    set.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect()
}

fn carry<const N: usize>(
    list: &[Interaction<N>],
    component: usize,
    g: &UnifiedGraph,
    local: &BTreeMap<NodeId, usize>,
    out: &mut Vec<Interaction<N>>,
) {
    for it in list {
        let mut atoms = [0; N];
        let inside = it.atoms.iter().zip(atoms.iter_mut()).all(|(&id, slot)| {
            let found = g.node_for(component, id).and_then(|v| local.get(&v));
            if let Some(&i) = found {
                *slot = i;
            }
            found.is_some()
        });
        if inside {
            out.push(Interaction {
                type_id: it.type_id,
                atoms,
            });
        }
    }
}

/// Builds the template for `set`: atoms copied from the graph, and every
/// input interaction whose atoms all lie inside the set, renumbered.
pub fn carry_features(
    g: &UnifiedGraph,
    topologies: &[SystemTopology],
    set: &BTreeSet<NodeId>,
    title: &str,
) -> MoleculeTemplateFile {
    let local = local_numbering(set);
    let mut t = MoleculeTemplateFile {
        title: title.to_string(),
        atoms: set
            .iter()
            .map(|&v| {
                let n = g.node(v);
                TemplateAtom {
                    type_id: n.type_id,
                    charge: n.charge,
                    position: n.position,
                }
            })
            .collect(),
        bonds: vec![],
        angles: vec![],
        dihedrals: vec![],
        impropers: vec![],
        special: None,
    };
    for (i, topo) in topologies.iter().enumerate() {
        let c = i + 1;
        carry(&topo.bonds, c, g, &local, &mut t.bonds);
        carry(&topo.angles, c, g, &local, &mut t.angles);
        carry(&topo.dihedrals, c, g, &local, &mut t.dihedrals);
        carry(&topo.impropers, c, g, &local, &mut t.impropers);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReactionTemplates {
    pub pre: MoleculeTemplateFile,
    pub post: MoleculeTemplateFile,
    pub map: ReactionMapFile,
    /// Global reactant nodes of the pre template, in template order.
    pub pre_nodes: Vec<NodeId>,
    /// Global product nodes of the post template, in template order.
    pub post_nodes: Vec<NodeId>,
    pub edge_atoms: Vec<NodeId>,
    pub cutoff: usize,
}

/// Everything the pre template must hold regardless of distance: atoms
/// whose bonding changed, their old and new partners, and deleted atoms.
fn required_reactants(report: &ReactionReport) -> Vec<NodeId> {
    let mut out: BTreeSet<NodeId> = report.deleted.iter().copied().collect();
    for c in report.changed() {
        out.insert(c.reactant);
        out.extend(c.delta_e.lost.iter().copied());
        for g in &c.delta_e.gained {
            if let DeltaNeighbor::Reactant(u) = g {
                out.insert(*u);
            }
        }
    }
    out.into_iter().collect()
}

/// Checks that the post set is the image of the pre set plus the created
/// atoms, and that created atoms only bond to template atoms.
fn check_splice(
    m: &AtomMapping,
    g_p: &UnifiedGraph,
    pre: &BTreeSet<NodeId>,
    post: &BTreeSet<NodeId>,
    created: &[NodeId],
) -> Result<(), TemplateError> {
    for &v in pre {
        if let Some(x) = m.image(v) {
            if !post.contains(&x) {
                return Err(TemplateError::InconsistentPruning(format!(
                    "image {x} of reactant atom {v} is outside the post template"
                )));
            }
        }
    }
    for &x in post {
        match m.preimage(x) {
            Some(v) if !pre.contains(&v) => {
                return Err(TemplateError::InconsistentPruning(format!(
                    "product atom {x} maps back to reactant atom {v} outside the pre template"
                )))
            }
            None if !created.contains(&x) => {
                return Err(TemplateError::InconsistentPruning(format!(
                    "product atom {x} has no preimage and is not created"
                )))
            }
            _ => {}
        }
    }
    for &y in created {
        if let Some(&u) = g_p.neighbors(y).iter().find(|u| !post.contains(u)) {
            return Err(TemplateError::InconsistentPruning(format!(
                "created atom {y} bonds to product atom {u} outside the post template"
            )));
        }
    }
    Ok(())
}

pub fn assemble_templates(
    m: &AtomMapping,
    report: &ReactionReport,
    g_r: &UnifiedGraph,
    g_p: &UnifiedGraph,
    reactants: &[SystemTopology],
    products: &[SystemTopology],
    cutoff: usize,
) -> Result<ReactionTemplates, TemplateError> {
    let pre = prune_to_cutoff(g_r, &report.initiators, cutoff, &required_reactants(report));
    let mut post: BTreeSet<NodeId> = pre.iter().filter_map(|&v| m.image(v)).collect();
    post.extend(report.created.iter().copied());
    check_splice(m, g_p, &pre, &post, &report.created)?;

    let edge_atoms = mark_edge_atoms(g_r, &pre);
    let pre_local = local_numbering(&pre);
    let post_local = local_numbering(&post);
    let map = ReactionMapFile {
        title: "# reaction map".to_string(),
        pre_atoms: pre.len(),
        post_atoms: post.len(),
        initiators: report.initiators.map(|v| pre_local[&v]),
        edge_ids: edge_atoms.iter().map(|v| pre_local[v]).collect(),
        delete_ids: report.deleted.iter().map(|v| pre_local[v]).collect(),
        create_ids: report.created.iter().map(|v| post_local[v]).collect(),
        equivalences: pre
            .iter()
            .filter_map(|&v| m.image(v).map(|x| (pre_local[&v], post_local[&x])))
            .collect(),
    };
    map.validate()?;
    Ok(ReactionTemplates {
        pre: carry_features(g_r, reactants, &pre, "# pre-reaction template"),
        post: carry_features(g_p, products, &post, "# post-reaction template"),
        map,
        pre_nodes: pre.into_iter().collect(),
        post_nodes: post.into_iter().collect(),
        edge_atoms: edge_atoms.into_iter().collect(),
        cutoff,
    })
}
