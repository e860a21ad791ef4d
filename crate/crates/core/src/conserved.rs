//! Conserved regions: maximum common connected induced sub-graphs between
//! the unmapped parts of the reactant and product graphs.
//!
//! The search is a McSplit-style branch and bound. Vertices of both graphs
//! are kept in label classes that are refined by adjacency to every pair
//! matched so far, so a class only holds vertices that can still be
//! matched to each other. The bound is the sum over classes of
//! `min(|left|, |right|)`. Once the first pair is fixed, only classes
//! adjacent to the matched region are branched on, which keeps every
//! mapping connected.
//!
//! Among mappings of maximum size, the one whose ascending list of
//! `(reactant, product)` pairs is lexicographically smallest is returned.
//! It is found greedily: reactant vertices are decided in ascending order,
//! each either mapped to the smallest product vertex that still admits a
//! maximum solution, or excluded.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{AtomLabel, NodeId, UnifiedGraph};
use crate::mapping::{AtomMapping, Provenance};

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;
pub const DEFAULT_ITERATIONS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("no reactant/product atom pair agrees on mass and type")]
    NoCommonSubgraph,
    #[error("common sub-graph search exceeded its budget of {budget} node expansions")]
    BudgetExceeded { budget: u64 },
}

/// Induced sub-graph over a sorted node list.
struct LocalGraph {
    nodes: Vec<NodeId>,
    labels: Vec<AtomLabel>,
    adj: Vec<Vec<bool>>,
}

impl LocalGraph {
    fn restrict(g: &UnifiedGraph, nodes: &[NodeId]) -> LocalGraph {
        let mut nodes = nodes.to_vec();
        nodes.sort_unstable();
        let n = nodes.len();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                adj[i][j] = g.has_edge(nodes[i], nodes[j]);
            }
        }
        LocalGraph {
            labels: nodes.iter().map(|&v| g.label(v)).collect(),
            nodes,
            adj,
        }
    }
}

#[derive(Clone)]
struct Domain {
    left: Vec<usize>,
    right: Vec<usize>,
    adjacent: bool,
}

type Pairs = Vec<(usize, usize)>;

struct Engine<'a> {
    left: &'a LocalGraph,
    right: &'a LocalGraph,
    budget: u64,
    expansions: u64,
}

impl Engine<'_> {
    fn tick(&mut self) -> Result<(), MappingError> {
        self.expansions += 1;
        if self.expansions > self.budget {
            Err(MappingError::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    fn domains(&self, left_ok: impl Fn(usize) -> bool, right_ok: impl Fn(usize) -> bool) -> Vec<Domain> {
        let mut classes: BTreeMap<AtomLabel, Domain> = BTreeMap::new();
        for (i, &l) in self.left.labels.iter().enumerate() {
            if left_ok(i) {
                classes
                    .entry(l)
                    .or_insert_with(|| Domain {
                        left: vec![],
                        right: vec![],
                        adjacent: false,
                    })
                    .left
                    .push(i);
            }
        }
        for (j, l) in self.right.labels.iter().enumerate() {
            if right_ok(j) {
                if let Some(d) = classes.get_mut(l) {
                    d.right.push(j);
                }
            }
        }
        classes
            .into_values()
            .filter(|d| !d.left.is_empty() && !d.right.is_empty())
            .collect()
    }

    fn refine(&self, domains: &[Domain], v: usize, w: usize) -> Vec<Domain> {
        let mut out = Vec::with_capacity(domains.len() + 2);
        for d in domains {
            let (l1, l0): (Vec<usize>, Vec<usize>) =
                d.left.iter().filter(|&&x| x != v).partition(|&&x| self.left.adj[v][x]);
            let (r1, r0): (Vec<usize>, Vec<usize>) = d
                .right
                .iter()
                .filter(|&&y| y != w)
                .partition(|&&y| self.right.adj[w][y]);
            if !l1.is_empty() && !r1.is_empty() {
                out.push(Domain {
                    left: l1,
                    right: r1,
                    adjacent: true,
                });
            }
            if !l0.is_empty() && !r0.is_empty() {
                out.push(Domain {
                    left: l0,
                    right: r0,
                    adjacent: d.adjacent,
                });
            }
        }
        out
    }

    fn bound(domains: &[Domain]) -> usize {
        domains.iter().map(|d| d.left.len().min(d.right.len())).sum()
    }

    /// Smallest class first, ties by smallest left vertex.
    fn select(domains: &[Domain], adjacent_only: bool) -> Option<usize> {
        domains
            .iter()
            .enumerate()
            .filter(|(_, d)| d.adjacent || !adjacent_only)
            .min_by_key(|(_, d)| (d.left.len().max(d.right.len()), d.left[0]))
            .map(|(i, _)| i)
    }

    fn without(mut domains: Vec<Domain>, di: usize, v: usize) -> Vec<Domain> {
        domains[di].left.retain(|&x| x != v);
        if domains[di].left.is_empty() {
            domains.remove(di);
        }
        domains
    }

    fn maximize(&mut self, domains: Vec<Domain>, current: &mut Pairs, best: &mut Pairs) -> Result<(), MappingError> {
        self.tick()?;
        if current.len() > best.len() {
            *best = current.clone();
        }
        if current.len() + Self::bound(&domains) <= best.len() {
            return Ok(());
        }
        let Some(di) = Self::select(&domains, !current.is_empty()) else {
            return Ok(());
        };
        let v = domains[di].left[0];
        for &w in &domains[di].right.clone() {
            let next = self.refine(&domains, v, w);
            current.push((v, w));
            self.maximize(next, current, best)?;
            current.pop();
        }
        let rest = Self::without(domains, di, v);
        self.maximize(rest, current, best)
    }

    fn connected(&self, pairs: &Pairs) -> bool {
        let vs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let mut seen = vec![false; vs.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..vs.len() {
                if !seen[j] && self.left.adj[vs[i]][vs[j]] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Finds a connected mapping of exactly `target` pairs extending
    /// `current`.
    fn reach(
        &mut self,
        domains: Vec<Domain>,
        current: &mut Pairs,
        target: usize,
    ) -> Result<Option<Pairs>, MappingError> {
        self.tick()?;
        if current.len() == target {
            return Ok(self.connected(current).then(|| current.clone()));
        }
        if current.len() + Self::bound(&domains) < target {
            return Ok(None);
        }
        let Some(di) = Self::select(&domains, true) else {
            return Ok(None);
        };
        let v = domains[di].left[0];
        for &w in &domains[di].right.clone() {
            let next = self.refine(&domains, v, w);
            current.push((v, w));
            if let Some(found) = self.reach(next, current, target)? {
                return Ok(Some(found));
            }
            current.pop();
        }
        let rest = Self::without(domains, di, v);
        self.reach(rest, current, target)
    }

    fn feasible(&mut self, forced: &Pairs, excluded: &[bool], target: usize) -> Result<Option<Pairs>, MappingError> {
        let mut domains = self.domains(|i| !excluded[i], |_| true);
        for &(v, w) in forced {
            let together = domains.iter().any(|d| d.left.contains(&v) && d.right.contains(&w));
            if !together {
                return Ok(None);
            }
            domains = self.refine(&domains, v, w);
        }
        let mut current = forced.clone();
        self.reach(domains, &mut current, target)
    }

    fn consistent(&self, forced: &Pairs, v: usize, w: usize) -> bool {
        self.left.labels[v] == self.right.labels[w]
            && forced
                .iter()
                .all(|&(a, b)| b != w && self.left.adj[v][a] == self.right.adj[w][b])
    }

    fn lexmin(&mut self, target: usize, witness: Pairs) -> Result<Pairs, MappingError> {
        let mut witness: BTreeMap<usize, usize> = witness.into_iter().collect();
        let mut forced: Pairs = Vec::new();
        let mut excluded = vec![false; self.left.nodes.len()];
        for r in 0..self.left.nodes.len() {
            if forced.len() == target {
                excluded[r] = true;
                continue;
            }
            let mut chosen = None;
            for p in 0..self.right.nodes.len() {
                if !self.consistent(&forced, r, p) {
                    continue;
                }
                if witness.get(&r) == Some(&p) {
                    chosen = Some(p);
                    break;
                }
                let mut trial = forced.clone();
                trial.push((r, p));
                if let Some(found) = self.feasible(&trial, &excluded, target)? {
                    witness = found.into_iter().collect();
                    chosen = Some(p);
                    break;
                }
            }
            match chosen {
                Some(p) => forced.push((r, p)),
                None => excluded[r] = true,
            }
        }
        Ok(forced)
    }
}

type GlobalPairs = Vec<(NodeId, NodeId)>;

/// Result of one common sub-graph search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonSubgraph {
    /// Ascending `(reactant, product)` pairs.
    pub pairs: Vec<(NodeId, NodeId)>,
    pub expansions: u64,
}

struct PairSearch {
    left: LocalGraph,
    right: LocalGraph,
}

impl PairSearch {
    fn new(g_r: &UnifiedGraph, r_nodes: &[NodeId], g_p: &UnifiedGraph, p_nodes: &[NodeId]) -> PairSearch {
        PairSearch {
            left: LocalGraph::restrict(g_r, r_nodes),
            right: LocalGraph::restrict(g_p, p_nodes),
        }
    }

    fn engine(&self, budget: u64) -> Engine<'_> {
        Engine {
            left: &self.left,
            right: &self.right,
            budget,
            expansions: 0,
        }
    }

    /// Maximum size and one witness.
    fn maximum(&self, budget: u64) -> Result<(Pairs, u64), MappingError> {
        let mut engine = self.engine(budget);
        let domains = engine.domains(|_| true, |_| true);
        let mut best = Vec::new();
        engine.maximize(domains, &mut Vec::new(), &mut best)?;
        Ok((best, engine.expansions))
    }

    fn smallest(&self, witness: Pairs, budget: u64) -> Result<(Vec<(NodeId, NodeId)>, u64), MappingError> {
        let mut engine = self.engine(budget);
        let local = engine.lexmin(witness.len(), witness)?;
        let pairs = local
            .into_iter()
            .map(|(v, w)| (self.left.nodes[v], self.right.nodes[w]))
            .collect();
        Ok((pairs, engine.expansions))
    }
}

/// Maximum common connected induced sub-graph of `g_r[r_nodes]` and
/// `g_p[p_nodes]`, matching on atom type and mass.
pub fn max_common_subgraph(
    g_r: &UnifiedGraph,
    r_nodes: &[NodeId],
    g_p: &UnifiedGraph,
    p_nodes: &[NodeId],
    budget: u64,
) -> Result<CommonSubgraph, MappingError> {
    let search = PairSearch::new(g_r, r_nodes, g_p, p_nodes);
    let (witness, spent) = search.maximum(budget)?;
    if witness.is_empty() {
        return Err(MappingError::NoCommonSubgraph);
    }
    let (pairs, spent_lex) = search.smallest(witness, budget - spent)?;
    Ok(CommonSubgraph {
        pairs,
        expansions: spent + spent_lex,
    })
}

/// One accepted conserved fragment.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Fragment {
    pub iteration: usize,
    pub reactant_component: usize,
    pub product_component: usize,
    pub size: usize,
}

#[derive(Debug, Clone)]
pub struct ConservedOutcome {
    pub mapping: AtomMapping,
    pub fragments: Vec<Fragment>,
    pub expansions: u64,
}

/// Runs `iterations` rounds of common sub-graph search. Each round tries
/// every (reactant molecule, product molecule) pair on the still-unmapped
/// atoms and keeps the single largest fragment.
pub fn iterate_conserved(
    g_r: &UnifiedGraph,
    g_p: &UnifiedGraph,
    iterations: usize,
    budget: u64,
) -> Result<ConservedOutcome, MappingError> {
    let mut mapping = AtomMapping::for_graphs(g_r, g_p);
    let mut fragments = Vec::new();
    let mut expansions = 0;

    for iteration in 1..=iterations {
        let mut candidates = Vec::new();
        for i in 1..=g_r.component_count() {
            let r_nodes: Vec<NodeId> = g_r
                .component(i)
                .iter()
                .copied()
                .filter(|&v| mapping.image(v).is_none())
                .collect();
            if r_nodes.is_empty() {
                continue;
            }
            for j in 1..=g_p.component_count() {
                let p_nodes: Vec<NodeId> = g_p
                    .component(j)
                    .iter()
                    .copied()
                    .filter(|&v| mapping.preimage(v).is_none())
                    .collect();
                if p_nodes.is_empty() {
                    continue;
                }
                let search = PairSearch::new(g_r, &r_nodes, g_p, &p_nodes);
                let (witness, spent) = search.maximum(budget)?;
                expansions += spent;
                if !witness.is_empty() {
                    candidates.push((i, j, search, witness));
                }
            }
        }
        let Some(size) = candidates.iter().map(|c| c.3.len()).max() else {
            break;
        };
        let mut winner: Option<(usize, usize, GlobalPairs)> = None;
        for (i, j, search, witness) in candidates {
            if witness.len() != size {
                continue;
            }
            let (pairs, spent) = search.smallest(witness, budget)?;
            expansions += spent;
            if winner.as_ref().is_none_or(|w| pairs < w.2) {
                winner = Some((i, j, pairs));
            }
        }
        let (i, j, pairs) = winner.expect("a maximum-size candidate exists");
        log::debug!(
            "conserved iteration {iteration}: {} atoms between reactant {i} and product {j}",
            pairs.len()
        );
        for (r, p) in pairs {
            mapping.insert(r, p, Provenance::Conserved { iteration });
        }
        fragments.push(Fragment {
            iteration,
            reactant_component: i,
            product_component: j,
            size,
        });
    }
    Ok(ConservedOutcome {
        mapping,
        fragments,
        expansions,
    })
}
