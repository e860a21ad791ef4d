use std::collections::BTreeSet;

use super::{NodeId, UnifiedGraph};

/// A bonded pattern with the atom types of its participants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Feature<const N: usize> {
    pub signature: [usize; N],
    pub nodes: [NodeId; N],
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureSet {
    pub bonds: Vec<Feature<2>>,
    pub angles: Vec<Feature<3>>,
    pub dihedrals: Vec<Feature<4>>,
    /// Center first, then three neighbors.
    pub impropers: Vec<Feature<4>>,
}

fn feature<const N: usize>(g: &UnifiedGraph, nodes: [NodeId; N]) -> Feature<N> {
    Feature {
        signature: nodes.map(|v| g.node(v).type_id),
        nodes,
    }
}

/// Of a chain and its reverse, keep the one with the smaller type
/// signature; node ids break ties.
fn canonical_chain<const N: usize>(g: &UnifiedGraph, nodes: [NodeId; N]) -> Feature<N> {
    let mut reversed = nodes;
    reversed.reverse();
    feature(g, nodes).min(feature(g, reversed))
}

/// Enumerates every bond, angle, proper dihedral and improper of `g`
/// exactly once.
pub fn enumerate_features(g: &UnifiedGraph) -> FeatureSet {
    let mut bonds = BTreeSet::new();
    let mut angles = BTreeSet::new();
    let mut dihedrals = BTreeSet::new();
    let mut impropers = BTreeSet::new();

    for &(a, b) in g.edges() {
        bonds.insert(canonical_chain(g, [a, b]));
    }
    for b in g.nodes() {
        let nbrs = g.neighbors(b);
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                angles.insert(canonical_chain(g, [a, b, c]));
            }
        }
        if nbrs.len() >= 3 {
            for i in 0..nbrs.len() {
                for j in i + 1..nbrs.len() {
                    for k in j + 1..nbrs.len() {
                        let mut outer = [nbrs[i], nbrs[j], nbrs[k]];
                        outer.sort_by_key(|&v| (g.node(v).type_id, v));
                        impropers.insert(feature(g, [b, outer[0], outer[1], outer[2]]));
                    }
                }
            }
        }
    }
    for &(b, c) in g.edges() {
        for &a in g.neighbors(b) {
            if a == c {
                continue;
            }
            for &d in g.neighbors(c) {
                if d == b || d == a {
                    continue;
                }
                dihedrals.insert(canonical_chain(g, [a, b, c, d]));
            }
        }
    }

    FeatureSet {
        bonds: bonds.into_iter().collect(),
        angles: angles.into_iter().collect(),
        dihedrals: dihedrals.into_iter().collect(),
        impropers: impropers.into_iter().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::super::Side;
    use super::*;
    use proptest::prelude::*;

    fn counts(g: &UnifiedGraph) -> (usize, usize, usize, usize) {
        let f = enumerate_features(g);
        (f.bonds.len(), f.angles.len(), f.dihedrals.len(), f.impropers.len())
    }

    #[test]
    fn path_of_three() {
        let g = UnifiedGraph::build(&[path(3)], Side::Reactant).unwrap();
        assert_eq!(counts(&g), (2, 1, 0, 0));
    }

    #[test]
    fn butane_skeleton() {
        let g = UnifiedGraph::build(&[path(4)], Side::Reactant).unwrap();
        assert_eq!(counts(&g), (3, 2, 1, 0));
    }

    /// Walks every sequence of distinct nodes joined by edges, counting each
    /// undirected path once.
    fn brute_force_paths(g: &UnifiedGraph, len: usize) -> usize {
        fn walk(g: &UnifiedGraph, path: &mut Vec<NodeId>, len: usize, out: &mut usize) {
            if path.len() == len {
                *out += 1;
                return;
            }
            let last = *path.last().unwrap();
            for &n in g.neighbors(last) {
                if !path.contains(&n) {
                    path.push(n);
                    walk(g, path, len, out);
                    path.pop();
                }
            }
        }
        let mut directed = 0;
        for v in g.nodes() {
            walk(g, &mut vec![v], len, &mut directed);
        }
        directed / 2
    }

    #[test]
    fn benzene_ring() {
        let g = UnifiedGraph::build(&[cycle(6)], Side::Reactant).unwrap();
        assert_eq!(brute_force_paths(&g, 3), 6);
        assert_eq!(brute_force_paths(&g, 4), 6);
        assert_eq!(counts(&g), (6, 6, 6, 0));
    }

    #[test]
    fn star_impropers() {
        let star = topology(&[1, 2, 2, 2, 2], &[(1, 2), (1, 3), (1, 4), (1, 5)]);
        let g = UnifiedGraph::build(&[star], Side::Reactant).unwrap();
        let f = enumerate_features(&g);
        assert_eq!(f.impropers.len(), 4);
        assert!(f.impropers.iter().all(|i| i.nodes[0] == NodeId(0)));
    }

    #[test]
    fn canonical_orientation_prefers_smaller_signature() {
        let g = UnifiedGraph::build(&[topology(&[3, 2, 1], &[(1, 2), (2, 3)])], Side::Reactant).unwrap();
        let f = enumerate_features(&g);
        assert_eq!(f.angles[0].signature, [1, 2, 3]);
        assert_eq!(f.angles[0].nodes, [NodeId(2), NodeId(1), NodeId(0)]);
    }

    fn random_tree() -> impl Strategy<Value = (Vec<usize>, Vec<(usize, usize)>)> {
        (2usize..14).prop_flat_map(|n| {
            (
                proptest::collection::vec(1usize..4, n),
                proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
            )
                .prop_map(|(types, parents)| {
                    let bonds = parents
                        .iter()
                        .enumerate()
                        .map(|(i, p)| (p.index(i + 1) + 1, i + 2))
                        .collect();
                    (types, bonds)
                })
        })
    }

    proptest! {
        #[test]
        fn tree_feature_counts((types, bonds) in random_tree()) {
            let g = UnifiedGraph::build(&[topology(&types, &bonds)], Side::Reactant).unwrap();
            let f = enumerate_features(&g);
            prop_assert_eq!(f.bonds.len(), types.len() - 1);
            let expected: usize = g.nodes().map(|v| g.degree(v) * g.degree(v).saturating_sub(1) / 2).sum();
            prop_assert_eq!(f.angles.len(), expected);
            prop_assert_eq!(f.angles.len(), brute_force_paths(&g, 3));
            prop_assert_eq!(f.dihedrals.len(), brute_force_paths(&g, 4));
            for a in &f.angles {
                prop_assert!(g.has_edge(a.nodes[0], a.nodes[1]) && g.has_edge(a.nodes[1], a.nodes[2]));
            }
        }
    }
}
