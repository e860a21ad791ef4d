//! Neighborhood similarity between unmapped atoms, and the assignment that
//! pairs them up.

mod assignment;
mod refine;

use std::fmt::Write;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{NodeId, ShellIndex, UnifiedGraph};

pub use assignment::{solve_assignment, Assignment};
pub use refine::{
    preserved_edge_count, refine_symmetric_paths, swap_hydrogens, DEFAULT_HYDROGEN_TOLERANCE, HYDROGEN_MASS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("weight {name} = {value} must be finite and non-negative")]
    Invalid { name: &'static str, value: f64 },
    #[error("weights sum to zero")]
    ZeroSum,
}

/// Relative importance of type agreement, mass agreement and neighborhood
/// overlap. Always normalized to sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoringWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ScoringWeights {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<ScoringWeights, WeightError> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !value.is_finite() || value < 0.0 {
                return Err(WeightError::Invalid { name, value });
            }
        }
        let sum = alpha + beta + gamma;
        if sum <= 0.0 {
            return Err(WeightError::ZeroSum);
        }
        Ok(ScoringWeights {
            alpha: alpha / sum,
            beta: beta / sum,
            gamma: gamma / sum,
        })
    }
}

impl Default for ScoringWeights {
    fn default() -> Self {
        ScoringWeights {
            alpha: 0.5,
            beta: 0.25,
            gamma: 0.25,
        }
    }
}

/// Size of the intersection of two sorted multisets.
fn multiset_overlap<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Scores arbitrary reactant/product node pairs. Shells are computed once.
pub struct Scorer<'a> {
    g_r: &'a UnifiedGraph,
    g_p: &'a UnifiedGraph,
    shells_r: ShellIndex,
    shells_p: ShellIndex,
    weights: ScoringWeights,
}

impl<'a> Scorer<'a> {
    pub fn new(g_r: &'a UnifiedGraph, g_p: &'a UnifiedGraph, weights: ScoringWeights) -> Scorer<'a> {
        Scorer {
            g_r,
            g_p,
            shells_r: ShellIndex::new(g_r),
            shells_p: ShellIndex::new(g_p),
            weights,
        }
    }

    pub fn weights(&self) -> ScoringWeights {
        self.weights
    }

    /// Depth used for a pair: the smaller eccentricity, at least 1.
    pub fn depth(&self, r: NodeId, p: NodeId) -> usize {
        self.shells_r.eccentricity(r).min(self.shells_p.eccentricity(p)).max(1)
    }

    pub fn score(&self, r: NodeId, p: NodeId) -> f64 {
        let w = self.weights;
        let lr = self.g_r.label(r);
        let lp = self.g_p.label(p);
        let root = w.alpha * f64::from(u8::from(lr.type_id == lp.type_id))
            + w.beta * f64::from(u8::from(lr.mass_key == lp.mass_key));
        let mut total = 0.0;
        let (mut seen_r, mut seen_p) = (0, 0);
        for k in 1..=self.depth(r, p) {
            let shell_r = self.shells_r.shell(r, k);
            let shell_p = self.shells_p.shell(p, k);
            seen_r += shell_r.len();
            seen_p += shell_p.len();
            let mut types_r: Vec<usize> = shell_r.iter().map(|&v| self.g_r.label(v).type_id).collect();
            let mut types_p: Vec<usize> = shell_p.iter().map(|&v| self.g_p.label(v).type_id).collect();
            let mut mass_r: Vec<i64> = shell_r.iter().map(|&v| self.g_r.label(v).mass_key).collect();
            let mut mass_p: Vec<i64> = shell_p.iter().map(|&v| self.g_p.label(v).mass_key).collect();
            types_r.sort_unstable();
            types_p.sort_unstable();
            mass_r.sort_unstable();
            mass_p.sort_unstable();
            let overlap = multiset_overlap(&types_r, &types_p) + multiset_overlap(&mass_r, &mass_p);
            total += root + w.gamma * overlap as f64;
        }
        total / seen_r.max(seen_p).max(1) as f64
    }
}

/// Scores of every unmapped reactant against every unmapped product.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub rows: Vec<NodeId>,
    pub cols: Vec<NodeId>,
    /// Row-major.
    pub scores: Vec<f64>,
    pub depths: Vec<usize>,
}

impl SimilarityMatrix {
    pub fn compute(scorer: &Scorer<'_>, rows: &[NodeId], cols: &[NodeId]) -> SimilarityMatrix {
        let mut scores = Vec::with_capacity(rows.len() * cols.len());
        let mut depths = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &p in cols {
                scores.push(scorer.score(r, p));
                depths.push(scorer.depth(r, p));
            }
        }
        SimilarityMatrix {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            scores,
            depths,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.scores[i * self.cols.len() + j]
    }

    /// CSV with global ids as row and column headers.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("reactant\\product");
        for p in &self.cols {
            let _ = write!(out, ",{p}");
        }
        out.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            let _ = write!(out, "{r}");
            for j in 0..self.cols.len() {
                let _ = write!(out, ",{:.6}", self.get(i, j));
            }
            out.push('\n');
        }
        out
    }
}

/// How raw costs were mapped onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization {
    pub method: &'static str,
    pub offset: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
    pub normalization: Normalization,
}

impl CostMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }
}

/// `C = -S`, then min-max scaled onto `[0, 1]`. A constant matrix becomes
/// all zeros.
pub fn build_cost_matrix(s: &SimilarityMatrix) -> CostMatrix {
    let raw: Vec<f64> = s.scores.iter().map(|x| -x).collect();
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    let (entries, scale) = if raw.is_empty() || range <= 0.0 {
        (vec![0.0; raw.len()], 0.0)
    } else {
        (raw.iter().map(|c| (c - lo) / range).collect(), 1.0 / range)
    };
    CostMatrix {
        rows: s.rows.len(),
        cols: s.cols.len(),
        entries,
        normalization: Normalization {
            method: "min-max",
            offset: if raw.is_empty() { 0.0 } else { lo },
            scale,
        },
    }
}
