#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use templater::cli::read_topology;
use templater::lammps::{AtomRecord, Interaction, SystemTopology, TypeCounts};

pub const MASSES: [f64; 12] = [
    12.011, 14.007, 15.999, 32.06, 1.008, 35.45, 18.998, 30.974, 79.904, 126.9, 28.085, 10.81,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture(name: &str) -> SystemTopology {
    read_topology(&fixture_path(name)).unwrap()
}

/// One molecule with 1-based `bonds`; type `t` has mass `MASSES[t - 1]`.
pub fn molecule(types: &[usize], bonds: &[(usize, usize)]) -> SystemTopology {
    let atoms = types
        .iter()
        .enumerate()
        .map(|(i, &t)| AtomRecord {
            id: i + 1,
            molecule: 1,
            type_id: t,
            charge: 0.0,
            position: [i as f64, (i % 3) as f64, 0.0],
        })
        .collect();
    let masses: BTreeMap<usize, f64> = types.iter().map(|&t| (t, MASSES[t - 1])).collect();
    SystemTopology {
        title: "synthetic".into(),
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
        bounds: [[-1.0, 20.0]; 3],
        type_counts: TypeCounts {
            atom: types.iter().copied().max().unwrap_or(0),
            bond: 1,
            ..TypeCounts::default()
        },
    }
}

/// Random connected graph on `n` nodes as 0-based edges: a random tree
/// plus each remaining pair with probability `extra`.
pub fn connected_edges(rng: &mut impl Rng, n: usize, extra: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !edges.contains(&(a, b)) && rng.random_bool(extra) {
                edges.push((a, b));
            }
        }
    }
    edges
}

pub fn one_based(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
}
