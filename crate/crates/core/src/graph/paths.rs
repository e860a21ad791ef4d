use std::collections::VecDeque;

use super::{NodeId, UnifiedGraph};

/// Breadth-first hop counts from the nearest source. `None` marks nodes no
/// source can reach.
pub fn shortest_path_distances(g: &UnifiedGraph, sources: &[NodeId]) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s.0].is_none() {
            dist[s.0] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v.0].unwrap_or(0);
        for &u in g.neighbors(v) {
            if dist[u.0].is_none() {
                dist[u.0] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Largest hop distance from `v` to any reachable node of its molecule.
pub fn eccentricity_within_component(g: &UnifiedGraph, v: NodeId) -> usize {
    let c = g.component_of(v);
    shortest_path_distances(g, &[v])
        .into_iter()
        .enumerate()
        .filter(|&(i, _)| g.component_of(NodeId(i)) == c)
        .filter_map(|(_, d)| d)
        .max()
        .unwrap_or(0)
}

/// Per-node neighbor shells: `shells(v)[k - 1]` holds the nodes at exactly
/// `k` hops from `v`, ascending.
#[derive(Debug, Clone)]
pub struct ShellIndex {
    shells: Vec<Vec<Vec<NodeId>>>,
}

impl ShellIndex {
    pub fn new(g: &UnifiedGraph) -> ShellIndex {
        let shells = g
            .nodes()
            .map(|v| {
                let dist = shortest_path_distances(g, &[v]);
                let mut layers: Vec<Vec<NodeId>> = Vec::new();
                for (i, d) in dist.into_iter().enumerate() {
                    if let Some(d) = d.filter(|&d| d > 0) {
                        if layers.len() < d {
                            layers.resize(d, Vec::new());
                        }
                        layers[d - 1].push(NodeId(i));
                    }
                }
                layers
            })
            .collect();
        ShellIndex { shells }
    }

    /// Nodes at exactly `k >= 1` hops; empty beyond the eccentricity.
    pub fn shell(&self, v: NodeId, k: usize) -> &[NodeId] {
        self.shells[v.0].get(k - 1).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn eccentricity(&self, v: NodeId) -> usize {
        self.shells[v.0].len()
    }
}
