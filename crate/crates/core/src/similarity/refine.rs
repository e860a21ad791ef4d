//! Repair passes over the similarity assignment.
//!
//! The assignment scores atoms independently, so atoms that look alike
//! (the two halves of a para-phenylene ring, the same atom in two copies of
//! one reactant, the hydrogens on one carbon) may be paired crosswise. Both
//! passes here only move non-conserved pairs, keep the mapping size, and
//! accept a change only when it strictly improves their objective, so a
//! second application is a no-op.

use std::collections::{BTreeSet, HashMap};

use super::{solve_assignment, CostMatrix, Normalization, Scorer};
use crate::graph::{shortest_path_distances, NodeId, UnifiedGraph};
use crate::mapping::{AtomMapping, Provenance};

pub const HYDROGEN_MASS: f64 = 1.008;
pub const DEFAULT_HYDROGEN_TOLERANCE: f64 = 0.01;

const MIN_GAIN: f64 = 1e-9;

fn preserved_at(m: &AtomMapping, g_r: &UnifiedGraph, g_p: &UnifiedGraph, a: NodeId) -> usize {
    let Some(x) = m.image(a) else { return 0 };
    g_r.neighbors(a)
        .iter()
        .filter_map(|&u| m.image(u))
        .filter(|&y| g_p.has_edge(x, y))
        .count()
}

/// Reactant bonds whose mapped endpoints are bonded in the product.
pub fn preserved_edge_count(m: &AtomMapping, g_r: &UnifiedGraph, g_p: &UnifiedGraph) -> usize {
    g_r.edges()
        .iter()
        .filter(|&&(a, b)| match (m.image(a), m.image(b)) {
            (Some(x), Some(y)) => g_p.has_edge(x, y),
            _ => false,
        })
        .count()
}

fn movable(m: &AtomMapping, v: NodeId) -> bool {
    m.provenance(v).is_some_and(|p| !p.is_conserved())
}

#[derive(Debug, Clone, Copy)]
enum Move {
    /// Exchange the images of two reactant atoms.
    Swap(NodeId, NodeId),
    /// Send a reactant atom to a currently unmapped product atom.
    Retarget(NodeId, NodeId),
    /// Hand a reactant atom's image to a currently unmapped reactant atom.
    Replace(NodeId, NodeId),
}

impl Move {
    fn apply(self, m: &mut AtomMapping, provenance: Provenance) {
        match self {
            Move::Swap(a, b) => {
                let (x, _) = m.remove(a).expect("a is mapped");
                let (y, _) = m.remove(b).expect("b is mapped");
                m.insert(a, y, provenance);
                m.insert(b, x, provenance);
            }
            Move::Retarget(a, y) => {
                m.remove(a);
                m.insert(a, y, provenance);
            }
            Move::Replace(a, c) => {
                let (x, _) = m.remove(a).expect("a is mapped");
                m.insert(c, x, provenance);
            }
        }
    }
}

struct PathObjective<'s, 'g> {
    scorer: &'s Scorer<'g>,
    g_r: &'g UnifiedGraph,
    g_p: &'g UnifiedGraph,
    cache: HashMap<(NodeId, NodeId), f64>,
}

impl PathObjective<'_, '_> {
    /// Similarity plus the weighted type/mass agreement of the two atoms
    /// themselves. Inside `S` that agreement is divided by the number of
    /// atoms in the compared shells, which lets it vanish in large
    /// molecules.
    fn score(&mut self, a: NodeId, x: NodeId) -> f64 {
        let (scorer, g_r, g_p) = (self.scorer, self.g_r, self.g_p);
        *self.cache.entry((a, x)).or_insert_with(|| {
            let w = scorer.weights();
            let (la, lx) = (g_r.label(a), g_p.label(x));
            let own = w.alpha * f64::from(u8::from(la.type_id == lx.type_id))
                + w.beta * f64::from(u8::from(la.mass_key == lx.mass_key));
            scorer.score(a, x) + own
        })
    }

    /// Sum of pair score plus preserved edges over the non-conserved pairs
    /// among `atoms`.
    fn local(&mut self, m: &AtomMapping, atoms: &BTreeSet<NodeId>) -> f64 {
        let mut total = 0.0;
        for &a in atoms {
            if !movable(m, a) {
                continue;
            }
            let x = m.image(a).expect("movable atoms are mapped");
            total += self.score(a, x) + preserved_at(m, self.g_r, self.g_p, a) as f64;
        }
        total
    }

    fn total(&mut self, m: &AtomMapping) -> f64 {
        let atoms: BTreeSet<NodeId> = m.pairs().map(|(a, _, _)| a).collect();
        self.local(m, &atoms)
    }

    fn gain(&mut self, m: &AtomMapping, mv: Move) -> f64 {
        let touched = match mv {
            Move::Swap(a, b) | Move::Replace(a, b) => vec![a, b],
            Move::Retarget(a, _) => vec![a],
        };
        let mut atoms: BTreeSet<NodeId> = BTreeSet::new();
        for &a in &touched {
            atoms.insert(a);
            atoms.extend(self.g_r.neighbors(a).iter().copied());
        }
        let before = self.local(m, &atoms);
        let mut trial = m.clone();
        mv.apply(&mut trial, Provenance::PathRefined);
        self.local(&trial, &atoms) - before
    }
}

/// Hop distance of every reactant atom from the conserved region.
fn anchor_distances(m: &AtomMapping, g_r: &UnifiedGraph) -> Vec<Option<usize>> {
    let anchors: Vec<NodeId> = g_r
        .nodes()
        .filter(|&v| m.provenance(v).is_some_and(Provenance::is_conserved))
        .collect();
    shortest_path_distances(g_r, &anchors)
}

/// Non-conserved pairs ordered outward from the conserved region, then by
/// id.
fn ordered_movable(m: &AtomMapping, g_r: &UnifiedGraph) -> Vec<NodeId> {
    let dist = anchor_distances(m, g_r);
    let mut atoms: Vec<NodeId> = g_r.nodes().filter(|&v| movable(m, v)).collect();
    atoms.sort_by_key(|&v| (dist[v.0].unwrap_or(usize::MAX), v));
    atoms
}

fn assign(rows: &[NodeId], cols: &[NodeId], mut score: impl FnMut(NodeId, NodeId) -> f64) -> Vec<(usize, usize)> {
    let mut entries = Vec::with_capacity(rows.len() * cols.len());
    for &a in rows {
        for &y in cols {
            entries.push(-score(a, y));
        }
    }
    let cost = CostMatrix {
        rows: rows.len(),
        cols: cols.len(),
        entries,
        normalization: Normalization {
            method: "none",
            offset: 0.0,
            scale: 1.0,
        },
    };
    solve_assignment(&cost).pairs
}

/// The current mapping with every non-conserved pair removed, plus the
/// reactant and product atoms that are up for reassignment.
fn open_up(m: &AtomMapping, g_r: &UnifiedGraph) -> (AtomMapping, Vec<NodeId>, Vec<NodeId>) {
    let order = ordered_movable(m, g_r);
    let mut rows = order.clone();
    let free = m.unmapped_reactants();
    let dist = anchor_distances(m, g_r);
    rows.extend(free);
    rows.sort_by_key(|&v| (dist[v.0].unwrap_or(usize::MAX), v));
    let mut cols: Vec<NodeId> = order.iter().map(|&a| m.image(a).expect("mapped")).collect();
    cols.extend(m.unmapped_products());
    cols.sort_unstable();
    let mut base = m.clone();
    for &a in &order {
        base.remove(a);
    }
    (base, rows, cols)
}

fn settle(out: &mut AtomMapping, old: &AtomMapping, a: NodeId, y: NodeId) {
    let provenance = match old.provenance(a) {
        Some(p) if old.image(a) == Some(y) => p,
        _ => Provenance::PathRefined,
    };
    out.insert(a, y, provenance);
}

fn bonds_to_placed(out: &AtomMapping, g_r: &UnifiedGraph, g_p: &UnifiedGraph, a: NodeId, y: NodeId) -> usize {
    g_r.neighbors(a)
        .iter()
        .filter_map(|&u| out.image(u))
        .filter(|&x| g_p.has_edge(x, y))
        .count()
}

/// One assignment over all non-conserved and unmapped atoms, scored by
/// pair score plus the bonds each candidate would share with conserved
/// atoms. Keeps the mapping size because the similarity stage left no
/// unmapped atoms on one of the two sides.
fn reassign_against_anchors(m: &AtomMapping, objective: &mut PathObjective<'_, '_>) -> AtomMapping {
    let (g_r, g_p) = (objective.g_r, objective.g_p);
    let (mut out, rows, cols) = open_up(m, g_r);
    let base = out.clone();
    let pairs = assign(&rows, &cols, |a, y| {
        objective.score(a, y) + bonds_to_placed(&base, g_r, g_p, a, y) as f64
    });
    for (i, j) in pairs {
        settle(&mut out, m, rows[i], cols[j]);
    }
    out
}

/// Re-derives the non-conserved pairs shell by shell, walking outward from
/// the conserved region. Each shell is assigned against the product atoms
/// still available, scoring pair score plus the bonds shared with atoms
/// placed before it.
fn rebuild_from_anchors(m: &AtomMapping, objective: &mut PathObjective<'_, '_>) -> AtomMapping {
    let (g_r, g_p) = (objective.g_r, objective.g_p);
    let dist = anchor_distances(m, g_r);
    let (mut out, rows, mut cols) = open_up(m, g_r);
    let target = m.len();
    let mut start = 0;
    while start < rows.len() && out.len() < target {
        let layer = dist[rows[start].0];
        let end = start + rows[start..].iter().take_while(|v| dist[v.0] == layer).count();
        let shell = &rows[start..end];
        let placed = out.clone();
        let pairs = assign(shell, &cols, |a, y| {
            objective.score(a, y) + bonds_to_placed(&placed, g_r, g_p, a, y) as f64
        });
        let budget = target - out.len();
        let mut taken = BTreeSet::new();
        for &(i, j) in pairs.iter().take(budget) {
            settle(&mut out, m, shell[i], cols[j]);
            taken.insert(j);
        }
        cols = cols
            .into_iter()
            .enumerate()
            .filter(|(j, _)| !taken.contains(j))
            .map(|(_, y)| y)
            .collect();
        start = end;
    }
    out
}

/// Reorders the non-conserved pairs so that, summed over them, pair score
/// plus the number of bonds kept intact cannot be raised by reassigning
/// outward from the conserved region, by swapping two images, or by moving
/// one pair onto an unmapped atom.
pub fn refine_symmetric_paths(
    mut m: AtomMapping,
    g_r: &UnifiedGraph,
    g_p: &UnifiedGraph,
    scorer: &Scorer<'_>,
) -> AtomMapping {
    let mut objective = PathObjective {
        scorer,
        g_r,
        g_p,
        cache: HashMap::new(),
    };
    loop {
        let current = objective.total(&m);
        let mut best: Option<(f64, AtomMapping)> = None;
        for candidate in [
            reassign_against_anchors(&m, &mut objective),
            rebuild_from_anchors(&m, &mut objective),
        ] {
            let gain = objective.total(&candidate) - current;
            if gain > MIN_GAIN && best.as_ref().is_none_or(|b| gain > b.0 + MIN_GAIN) {
                best = Some((gain, candidate));
            }
        }
        if let Some((gain, candidate)) = best {
            log::debug!("path refinement: reassignment from the conserved region gains {gain:.4}");
            m = candidate;
            continue;
        }
        let order = ordered_movable(&m, g_r);
        let free_r = m.unmapped_reactants();
        let free_p = m.unmapped_products();
        let mut best: Option<(f64, Move)> = None;
        let mut consider = |mv: Move, m: &AtomMapping, best: &mut Option<(f64, Move)>| {
            let gain = objective.gain(m, mv);
            if gain > MIN_GAIN && best.as_ref().is_none_or(|b| gain > b.0 + MIN_GAIN) {
                *best = Some((gain, mv));
            }
        };
        for (i, &a) in order.iter().enumerate() {
            let x = m.image(a).expect("movable atoms are mapped");
            for &b in &order[i + 1..] {
                let y = m.image(b).expect("movable atoms are mapped");
                if g_r.label(a) == g_r.label(b) || g_p.label(x) == g_p.label(y) {
                    consider(Move::Swap(a, b), &m, &mut best);
                }
            }
            for &y in free_p.iter().filter(|&&y| g_p.label(y) == g_p.label(x)) {
                consider(Move::Retarget(a, y), &m, &mut best);
            }
            for &c in free_r.iter().filter(|&&c| g_r.label(c) == g_r.label(a)) {
                consider(Move::Replace(a, c), &m, &mut best);
            }
        }
        let Some((gain, mv)) = best else { break };
        log::debug!("path refinement: {mv:?} gains {gain:.4}");
        mv.apply(&mut m, Provenance::PathRefined);
    }
    m
}

fn hydrogen_like(g: &UnifiedGraph, v: NodeId, tolerance: f64) -> bool {
    (g.node(v).mass - HYDROGEN_MASS).abs() <= tolerance
}

fn label_matches(m: &AtomMapping, g_r: &UnifiedGraph, g_p: &UnifiedGraph) -> usize {
    m.pairs().filter(|&(a, x, _)| g_r.label(a) == g_p.label(x)).count()
}

/// Re-pairs hydrogen-like neighbors of aligned atoms whose mapped
/// neighborhoods disagree, whenever that keeps more bonds intact without
/// losing a type/mass match.
pub fn swap_hydrogens(mut m: AtomMapping, g_r: &UnifiedGraph, g_p: &UnifiedGraph, tolerance: f64) -> AtomMapping {
    loop {
        let edges = preserved_edge_count(&m, g_r, g_p);
        let labels = label_matches(&m, g_r, g_p);
        let mut chosen = None;
        'pairs: for (v, w, _) in m.pairs() {
            if preserved_at(&m, g_r, g_p, v) == g_r.degree(v).max(g_p.degree(w)) {
                continue;
            }
            let hs_r: Vec<NodeId> = g_r
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&h| hydrogen_like(g_r, h, tolerance))
                .filter(|&h| match m.image(h) {
                    None => true,
                    Some(y) => movable(&m, h) && !g_p.has_edge(w, y),
                })
                .collect();
            let hs_p: Vec<NodeId> = g_p
                .neighbors(w)
                .iter()
                .copied()
                .filter(|&y| hydrogen_like(g_p, y, tolerance))
                .filter(|&y| match m.preimage(y) {
                    None => true,
                    Some(h) => movable(&m, h) && !g_r.has_edge(v, h),
                })
                .collect();
            for &h in &hs_r {
                for &y in &hs_p {
                    let mv = match (m.image(h), m.preimage(y)) {
                        (Some(_), Some(h2)) => Move::Swap(h, h2),
                        (Some(_), None) => Move::Retarget(h, y),
                        (None, Some(h2)) => Move::Replace(h2, h),
                        (None, None) => continue,
                    };
                    let mut trial = m.clone();
                    mv.apply(&mut trial, Provenance::HydrogenSwapped);
                    if preserved_edge_count(&trial, g_r, g_p) > edges && label_matches(&trial, g_r, g_p) >= labels {
                        chosen = Some(trial);
                        break 'pairs;
                    }
                }
            }
        }
        match chosen {
            Some(next) => m = next,
            None => return m,
        }
    }
}
