//! Eigenvector centrality by power iteration.
//!
//! The iteration runs on `A + I` instead of `A`. Both share eigenvectors,
//! but the shift makes the Perron root strictly dominant in modulus, so the
//! iteration also converges on bipartite molecules (every tree, every even
//! ring) where plain `A` oscillates between two vectors.

use std::collections::BTreeMap;

use super::{GraphError, NodeId, UnifiedGraph};

pub const CENTRALITY_TOLERANCE: f64 = 1e-10;
pub const CENTRALITY_MAX_ITERATIONS: usize = 10_000;

/// Principal eigenvector of one molecule's adjacency matrix, unit Euclidean
/// norm, non-negative entries.
pub fn eigenvector_centrality(g: &UnifiedGraph, component: usize) -> Result<BTreeMap<NodeId, f64>, GraphError> {
    let members = g.component(component);
    let has_edges = members.iter().any(|&v| g.degree(v) > 0);
    if !has_edges {
        return Err(GraphError::NoEdges {
            side: g.side(),
            component,
        });
    }
    let local: BTreeMap<NodeId, usize> = members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = members.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut next = vec![0.0; n];

    for _ in 0..CENTRALITY_MAX_ITERATIONS {
        for (i, &v) in members.iter().enumerate() {
            next[i] = x[i] + g.neighbors(v).iter().map(|u| x[local[u]]).sum::<f64>();
        }
        let norm = next.iter().map(|c| c * c).sum::<f64>().sqrt();
        next.iter_mut().for_each(|c| *c /= norm);
        let diff = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if diff < CENTRALITY_TOLERANCE {
            return Ok(members.iter().copied().zip(x).collect());
        }
    }
    Err(GraphError::NotConverged(CENTRALITY_MAX_ITERATIONS))
}
