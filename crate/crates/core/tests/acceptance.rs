//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a blocking criterion fails.
//!
//! Criteria 1-3 compare against published counts for three reactions. The
//! fixture data files are rebuilt from SMILES with approximate force-field
//! typing, so those three are reported but do not block.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use templater::conserved::iterate_conserved;
use templater::graph::{eigenvector_centrality, NodeId, Side, UnifiedGraph};
use templater::lammps::{
    parse_molecule_template, write_molecule_template, Interaction, MoleculeTemplateFile, SpecialNeighbors,
    SystemTopology, TemplateAtom,
};
use templater::similarity::{solve_assignment, CostMatrix, Normalization};
use templater::{run_pipeline, DotStage, PipelineConfig, PipelineRun};

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
    /// Everything the criterion computed, for the determinism check.
    transcript: String,
}

struct Criterion {
    id: u8,
    name: &'static str,
    blocking: bool,
    run: fn() -> Outcome,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        id: 1,
        name: "poly-addition fixture",
        blocking: false,
        run: poly_addition,
    },
    Criterion {
        id: 2,
        name: "poly-condensation fixture",
        blocking: false,
        run: poly_condensation,
    },
    Criterion {
        id: 3,
        name: "chain polymerization fixture",
        blocking: false,
        run: chain_growth,
    },
    Criterion {
        id: 4,
        name: "common sub-graph oracle",
        blocking: true,
        run: mcs_oracle,
    },
    Criterion {
        id: 5,
        name: "assignment oracle",
        blocking: true,
        run: assignment_oracle,
    },
    Criterion {
        id: 6,
        name: "centrality",
        blocking: true,
        run: centrality,
    },
    Criterion {
        id: 7,
        name: "template round trip",
        blocking: true,
        run: round_trip,
    },
    Criterion {
        id: 8,
        name: "synthetic reactions",
        blocking: true,
        run: synthetic_reactions,
    },
];

fn main() -> ExitCode {
    let mut ok = true;
    let mut transcripts = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let out = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        let note = if c.blocking || out.pass { "" } else { " [non-blocking]" };
        println!(
            "{verdict} criterion {} {}: {} ({secs:.2} s){note}",
            c.id, c.name, out.detail
        );
        ok &= out.pass || !c.blocking;
        transcripts.push(out.transcript);
    }

    let start = Instant::now();
    let mut differing = Vec::new();
    for _ in 0..2 {
        for (c, first) in CRITERIA.iter().zip(&transcripts) {
            if (c.run)().transcript != *first && !differing.contains(&c.id) {
                differing.push(c.id);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if differing.is_empty() {
        println!("PASS criterion 9 determinism: criteria 1-8 identical over 3 runs ({secs:.2} s)");
    } else {
        println!("FAIL criterion 9 determinism: criteria {differing:?} differ between runs ({secs:.2} s)");
        ok = false;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

/// Collects named checks; the criterion passes when all of them do.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    passed: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: String) {
        if ok {
            self.passed.push(what);
        } else {
            self.failed.push(what);
        }
    }

    fn outcome(self, transcript: String) -> Outcome {
        let pass = self.failed.is_empty();
        let detail = if pass {
            self.passed.join(", ")
        } else {
            self.failed.join(", ")
        };
        Outcome {
            pass,
            detail,
            transcript,
        }
    }
}

/// Failing case numbers, if any.
fn listed<T: std::fmt::Debug>(cases: &[T]) -> String {
    if cases.is_empty() {
        String::new()
    } else {
        format!(", failing {cases:?}")
    }
}

// ---------------------------------------------------------------------------
// Fixture reactions

fn run_fixture(reactants: &[&str], products: &[&str]) -> (PipelineRun, Duration) {
    let r: Vec<SystemTopology> = reactants.iter().map(|n| fixture(n)).collect();
    let p: Vec<SystemTopology> = products.iter().map(|n| fixture(n)).collect();
    let start = Instant::now();
    let run = run_pipeline(&r, &p, &PipelineConfig::default()).expect("fixture pipeline");
    (run, start.elapsed())
}

fn outputs(run: &PipelineRun) -> String {
    let mut t = String::new();
    for text in [
        run.pre_template(),
        run.post_template(),
        run.map_file(),
        run.report_json(),
    ] {
        t.push_str(&text);
    }
    for stage in DotStage::ALL {
        t.push_str(&run.dot(stage));
    }
    t
}

fn count(checks: &mut Checks, what: &str, got: usize, want: usize) {
    checks.check(got == want, format!("{what} {got} (expected {want})"));
}

fn poly_addition() -> Outcome {
    let (run, took) = run_fixture(
        &["polyaddition_mdi.data", "polyaddition_bd.data"],
        &["polyaddition_urethane.data"],
    );
    let mut c = Checks::default();
    count(&mut c, "conserved", run.mapping.conserved_count(), 30);
    count(&mut c, "reactant nodes", run.reactants.len(), 45);
    count(&mut c, "pre-template atoms", run.templates.pre_nodes.len(), 31);
    count(&mut c, "created", run.report.created.len(), 0);
    count(&mut c, "deleted", run.report.deleted.len(), 0);
    c.check(
        took < Duration::from_secs(10),
        format!("runtime {:.3} s", took.as_secs_f64()),
    );
    c.outcome(outputs(&run))
}

fn poly_condensation() -> Outcome {
    let (run, took) = run_fixture(
        &["polycondensation_ht.data", "polycondensation_mpd.data"],
        &["polycondensation_amide.data"],
    );
    let mut c = Checks::default();
    count(&mut c, "conserved", run.mapping.conserved_count(), 36);
    count(&mut c, "product nodes", run.products.len(), 40);
    count(&mut c, "post-template atoms", run.templates.post_nodes.len(), 27);
    count(&mut c, "deleted", run.report.deleted.len(), 3);
    let labels: Vec<&str> = run
        .report
        .initiators
        .iter()
        .map(|&v| run.reactants.type_label(run.reactants.node(v).type_id).unwrap_or(""))
        .collect();
    c.check(labels == ["c", "nh"], format!("initiator types {labels:?}"));
    c.check(
        took < Duration::from_secs(10),
        format!("runtime {:.3} s", took.as_secs_f64()),
    );
    c.outcome(outputs(&run))
}

fn chain_growth() -> Outcome {
    let (run, took) = run_fixture(&["chain_butene1.data", "chain_butene2.data"], &["chain_octane.data"]);
    let mut c = Checks::default();
    count(&mut c, "conserved", run.mapping.conserved_count(), 14);
    count(&mut c, "product nodes", run.products.len(), 26);
    count(&mut c, "pre-template atoms", run.templates.pre_nodes.len(), 24);
    count(&mut c, "created", run.report.created.len(), 2);
    c.check(
        took < Duration::from_secs(10),
        format!("runtime {:.3} s", took.as_secs_f64()),
    );
    c.outcome(outputs(&run))
}

// ---------------------------------------------------------------------------
// Criterion 4: exhaustive maximum common connected induced sub-graph

struct Small {
    labels: Vec<usize>,
    adj: Vec<Vec<bool>>,
}

impl Small {
    fn new(labels: Vec<usize>, edges: &[(usize, usize)]) -> Small {
        let n = labels.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Small { labels, adj }
    }

    fn connected(&self, verts: &[usize]) -> bool {
        let mut seen = vec![verts[0]];
        let mut i = 0;
        while i < seen.len() {
            let v = seen[i];
            for &u in verts {
                if self.adj[v][u] && !seen.contains(&u) {
                    seen.push(u);
                }
            }
            i += 1;
        }
        seen.len() == verts.len()
    }
}

/// Can `a[verts]` be embedded in `b` as an induced, label-preserving copy?
fn embeds(a: &Small, verts: &[usize], b: &Small, image: &mut Vec<usize>) -> bool {
    let i = image.len();
    if i == verts.len() {
        return true;
    }
    for w in 0..b.labels.len() {
        if image.contains(&w) || b.labels[w] != a.labels[verts[i]] {
            continue;
        }
        if (0..i).all(|j| a.adj[verts[i]][verts[j]] == b.adj[w][image[j]]) {
            image.push(w);
            if embeds(a, verts, b, image) {
                return true;
            }
            image.pop();
        }
    }
    false
}

fn oracle_mcs(a: &Small, b: &Small) -> usize {
    let n = a.labels.len();
    for k in (1..=n.min(b.labels.len())).rev() {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let verts: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            if a.connected(&verts) && embeds(a, &verts, b, &mut Vec::new()) {
                return k;
            }
        }
    }
    0
}

/// Labels and 0-based edges.
type Labeled = (Vec<usize>, Vec<(usize, usize)>);

fn random_pair(rng: &mut impl Rng) -> (Labeled, Labeled) {
    let n = rng.random_range(1..=10);
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
    let edges = connected_edges(rng, n, 0.15);
    if rng.random_bool(0.5) {
        let m = rng.random_range(1..=10);
        let other: Vec<usize> = (0..m).map(|_| rng.random_range(0..3)).collect();
        return ((labels, edges), (other, connected_edges(rng, m, 0.15)));
    }
    // a perturbed, shuffled copy
    let mut l2 = labels.clone();
    let mut e2 = edges.clone();
    for _ in 0..rng.random_range(0..=2) {
        let v = rng.random_range(0..n);
        l2[v] = rng.random_range(0..3);
    }
    if l2.len() < 10 && rng.random_bool(0.5) {
        e2.push((rng.random_range(0..l2.len()), l2.len()));
        l2.push(rng.random_range(0..3));
    }
    if rng.random_bool(0.5) {
        let a = rng.random_range(0..l2.len());
        let b = rng.random_range(0..l2.len());
        if a != b && !e2.contains(&(a, b)) && !e2.contains(&(b, a)) {
            e2.push((a.min(b), a.max(b)));
        }
    }
    let mut perm: Vec<usize> = (0..l2.len()).collect();
    perm.shuffle(rng);
    let mut l3 = vec![0; l2.len()];
    for (v, &p) in perm.iter().enumerate() {
        l3[p] = l2[v];
    }
    let e3 = e2.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    ((labels, edges), (l3, e3))
}

fn mcs_oracle() -> Outcome {
    let mut rng = rng(4);
    let mut transcript = String::new();
    let mut mismatches = Vec::new();
    let mut invalid = 0;
    for case in 0..200 {
        let ((la, ea), (lb, eb)) = random_pair(&mut rng);
        let types = |l: &[usize]| l.iter().map(|x| x + 1).collect::<Vec<_>>();
        let g_r = UnifiedGraph::build(&[molecule(&types(&la), &one_based(&ea))], Side::Reactant).unwrap();
        let g_p = UnifiedGraph::build(&[molecule(&types(&lb), &one_based(&eb))], Side::Product).unwrap();
        let got = iterate_conserved(&g_r, &g_p, 1, 10_000_000).unwrap().mapping;
        let (a, b) = (Small::new(la, &ea), Small::new(lb, &eb));
        let want = oracle_mcs(&a, &b);
        if got.len() != want {
            mismatches.push(case);
        }
        let pairs: Vec<(usize, usize)> = got.pairs().map(|(r, p, _)| (r.0, p.0)).collect();
        let verts: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let valid = pairs.iter().all(|&(r, p)| a.labels[r] == b.labels[p])
            && pairs
                .iter()
                .all(|&(r, p)| pairs.iter().all(|&(s, q)| a.adj[r][s] == b.adj[p][q]))
            && (verts.is_empty() || a.connected(&verts));
        if !valid {
            invalid += 1;
        }
        let _ = writeln!(transcript, "{case} {want} {pairs:?}");
    }
    let mut c = Checks::default();
    c.check(
        mismatches.is_empty(),
        format!(
            "{}/200 sizes match the oracle{}",
            200 - mismatches.len(),
            listed(&mismatches)
        ),
    );
    c.check(invalid == 0, format!("{} invalid mappings", invalid));
    c.outcome(transcript)
}

// ---------------------------------------------------------------------------
// Criterion 5: brute-force assignment

fn brute_force(cost: &[Vec<i64>], row: usize, used: &mut Vec<bool>) -> i64 {
    if row == cost.len() {
        return 0;
    }
    let mut best = i64::MAX;
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            best = best.min(cost[row][j] + brute_force(cost, row + 1, used));
            used[j] = false;
        }
    }
    best
}

fn assignment_oracle() -> Outcome {
    let mut rng = rng(5);
    let mut transcript = String::new();
    let mut wrong = Vec::new();
    for case in 0..500 {
        let (n, m) = (rng.random_range(1..=7), rng.random_range(1..=7));
        let costs: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(0..=50)).collect())
            .collect();
        let matrix = CostMatrix {
            rows: n,
            cols: m,
            entries: costs.iter().flatten().map(|&x| x as f64).collect(),
            normalization: Normalization {
                method: "none",
                offset: 0.0,
                scale: 1.0,
            },
        };
        let a = solve_assignment(&matrix);
        let want = if n <= m {
            brute_force(&costs, 0, &mut vec![false; m])
        } else {
            let t: Vec<Vec<i64>> = (0..m).map(|j| (0..n).map(|i| costs[i][j]).collect()).collect();
            brute_force(&t, 0, &mut vec![false; n])
        };
        let summed: i64 = a.pairs.iter().map(|&(i, j)| costs[i][j]).sum();
        if a.cost != want as f64 || summed != want || a.pairs.len() != n.min(m) {
            wrong.push(case);
        }
        let _ = writeln!(transcript, "{case} {:?}", a.pairs);
    }
    let mut c = Checks::default();
    c.check(
        wrong.is_empty(),
        format!("{}/500 optimal costs match{}", 500 - wrong.len(), listed(&wrong)),
    );
    c.outcome(transcript)
}

// ---------------------------------------------------------------------------
// Criterion 6: eigenvector centrality

fn centrality_of(types: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let g = UnifiedGraph::build(&[molecule(&vec![1; types], &one_based(edges))], Side::Reactant).unwrap();
    let c: BTreeMap<NodeId, f64> = eigenvector_centrality(&g, 1).unwrap();
    c.into_values().collect()
}

fn residual(n: usize, edges: &[(usize, usize)], x: &[f64]) -> f64 {
    let mut ax = vec![0.0; n];
    for &(a, b) in edges {
        ax[a] += x[b];
        ax[b] += x[a];
    }
    let lambda: f64 = ax.iter().zip(x).map(|(p, q)| p * q).sum();
    ax.iter()
        .zip(x)
        .map(|(p, q)| (p - lambda * q).abs())
        .fold(0.0, f64::max)
}

/// Principal eigenvector from a dense symmetric eigen-decomposition.
fn dense_principal(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut a = DMatrix::<f64>::zeros(n, n);
    for &(p, q) in edges {
        a[(p, q)] = 1.0;
        a[(q, p)] = 1.0;
    }
    let eig = a.symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    v.iter().map(|x| sign * x).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn centrality() -> Outcome {
    let mut rng = rng(6);
    let mut transcript = String::new();
    let mut worst_residual: f64 = 0.0;
    let mut worst_dense: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..=12);
        let edges = connected_edges(&mut rng, n, 0.2);
        let x = centrality_of(n, &edges);
        worst_residual = worst_residual.max(residual(n, &edges, &x));
        worst_dense = worst_dense.max(max_diff(&x, &dense_principal(n, &edges)));
        let _ = writeln!(transcript, "{x:?}");
    }

    let mut worst_closed: f64 = 0.0;
    for n in 2..=12 {
        let star: Vec<(usize, usize)> = (1..n).map(|v| (0, v)).collect();
        let leaves = n - 1;
        let mut want = vec![1.0 / (2.0 * leaves as f64).sqrt(); n];
        want[0] = 0.5f64.sqrt();
        worst_closed = worst_closed.max(max_diff(&centrality_of(n, &star), &want));

        let path: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
        let raw: Vec<f64> = (1..=n)
            .map(|k| (k as f64 * std::f64::consts::PI / (n + 1) as f64).sin())
            .collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let want: Vec<f64> = raw.iter().map(|x| x / norm).collect();
        worst_closed = worst_closed.max(max_diff(&centrality_of(n, &path), &want));

        if n >= 3 {
            let mut ring = path.clone();
            ring.push((n - 1, 0));
            let want = vec![1.0 / (n as f64).sqrt(); n];
            worst_closed = worst_closed.max(max_diff(&centrality_of(n, &ring), &want));
        }
    }
    let mut c = Checks::default();
    c.check(worst_residual <= 1e-8, format!("max residual {worst_residual:.1e}"));
    c.check(worst_closed <= 1e-6, format!("star/path/ring error {worst_closed:.1e}"));
    c.check(
        worst_dense <= 1e-6,
        format!("dense eigenvector error {worst_dense:.1e}"),
    );
    c.outcome(transcript)
}

// ---------------------------------------------------------------------------
// Criterion 7: template serialization

fn interactions<const N: usize>(rng: &mut impl Rng, atoms: usize, max: usize) -> Vec<Interaction<N>> {
    (0..rng.random_range(0..=max))
        .map(|_| Interaction {
            type_id: rng.random_range(1..=6),
            atoms: std::array::from_fn(|_| rng.random_range(1..=atoms)),
        })
        .collect()
}

fn random_template(rng: &mut impl Rng, k: usize) -> MoleculeTemplateFile {
    let n = rng.random_range(1..=30);
    let special = rng.random_bool(0.5).then(|| {
        let counts: Vec<[usize; 3]> = (0..n)
            .map(|_| std::array::from_fn(|_| rng.random_range(0..=2)))
            .collect();
        let neighbors = counts
            .iter()
            .map(|c| (0..c.iter().sum::<usize>()).map(|_| rng.random_range(1..=n)).collect())
            .collect();
        SpecialNeighbors { counts, neighbors }
    });
    MoleculeTemplateFile {
        title: format!("# random template {k}"),
        atoms: (0..n)
            .map(|_| TemplateAtom {
                type_id: rng.random_range(1..=9),
                charge: rng.random_range(-1.0..1.0),
                position: std::array::from_fn(|_| rng.random_range(-50.0..50.0)),
            })
            .collect(),
        bonds: interactions(rng, n, 20),
        angles: interactions(rng, n, 20),
        dihedrals: interactions(rng, n, 20),
        impropers: interactions(rng, n, 5),
        special,
    }
}

fn round_trip() -> Outcome {
    let mut rng = rng(7);
    let mut transcript = String::new();
    let mut broken = Vec::new();
    for k in 0..100 {
        let first = write_molecule_template(&random_template(&mut rng, k));
        let second = parse_molecule_template(&first).map(|t| write_molecule_template(&t));
        if second.as_deref() != Ok(first.as_str()) {
            broken.push(k);
        }
        transcript.push_str(&first);
    }
    let mut c = Checks::default();
    c.check(
        broken.is_empty(),
        format!("{}/100 byte-identical{}", 100 - broken.len(), listed(&broken)),
    );
    c.outcome(transcript)
}

// ---------------------------------------------------------------------------
// Criterion 8: scripted edits

/// Two molecules with disjoint type alphabets. The bonding sites and the
/// optional leaving atoms carry labels unique within their molecule.
struct Edit {
    reactants: [SystemTopology; 2],
    product: SystemTopology,
    /// Reactant node ids of the new bond's endpoints.
    endpoints: [NodeId; 2],
    deleted: usize,
}

fn synthetic_edit(rng: &mut impl Rng) -> Edit {
    let leave = rng.random_bool(0.5);
    let mut sides = Vec::new();
    for (body, site_type, leaving_type) in [([1, 2, 3], 7, 9), ([10, 11, 12], 8, 6)] {
        let n = rng.random_range(2..=8);
        let mut types: Vec<usize> = (0..n).map(|_| body[rng.random_range(0..3)]).collect();
        let mut edges = connected_edges(rng, n, 0.1);
        let site = rng.random_range(0..n);
        types[site] = site_type;
        if leave {
            edges.push((site, types.len()));
            types.push(leaving_type);
        }
        sides.push((types, edges, site));
    }

    // product: both molecules without the leaving atoms, bonded at the
    // sites, atom ids shuffled
    let kept = |s: &(Vec<usize>, Vec<(usize, usize)>, usize)| s.0.len() - leave as usize;
    let offset = kept(&sides[0]);
    let total = offset + kept(&sides[1]);
    let mut perm: Vec<usize> = (0..total).collect();
    perm.shuffle(rng);
    let mut types = vec![0; total];
    let mut edges = Vec::new();
    for (k, side) in sides.iter().enumerate() {
        let base = if k == 0 { 0 } else { offset };
        for v in 0..kept(side) {
            types[perm[base + v]] = side.0[v];
        }
        for &(a, b) in &side.1 {
            if a < kept(side) && b < kept(side) {
                edges.push((perm[base + a], perm[base + b]));
            }
        }
    }
    edges.push((perm[sides[0].2], perm[offset + sides[1].2]));

    let mol = |s: &(Vec<usize>, Vec<(usize, usize)>, usize)| molecule(&s.0, &one_based(&s.1));
    Edit {
        reactants: [mol(&sides[0]), mol(&sides[1])],
        product: molecule(&types, &one_based(&edges)),
        endpoints: [NodeId(sides[0].2), NodeId(sides[0].0.len() + sides[1].2)],
        deleted: if leave { 2 } else { 0 },
    }
}

fn splice_consistent(run: &PipelineRun) -> bool {
    let t = &run.templates;
    let pre: BTreeSet<NodeId> = t.pre_nodes.iter().copied().collect();
    let mut post: BTreeSet<NodeId> = pre.iter().filter_map(|&v| run.mapping.image(v)).collect();
    post.extend(run.report.created.iter().copied());
    let edges_ok = t
        .edge_atoms
        .iter()
        .all(|&v| run.reactants.neighbors(v).iter().any(|u| !pre.contains(u)));
    let deleted_in_pre = run.report.deleted.iter().filter(|v| pre.contains(v)).count();
    post == t.post_nodes.iter().copied().collect()
        && t.pre.atoms.len() == pre.len()
        && t.post.atoms.len() == post.len()
        && t.map.equivalences.len() == pre.len() - deleted_in_pre
        && edges_ok
}

fn synthetic_reactions() -> Outcome {
    let mut rng = rng(8);
    let mut transcript = String::new();
    let mut c = Checks::default();
    let (mut counts, mut initiators, mut splice, mut errors) = (vec![], vec![], vec![], vec![]);
    for case in 0..50 {
        let edit = synthetic_edit(&mut rng);
        let run = match run_pipeline(
            &edit.reactants,
            std::slice::from_ref(&edit.product),
            &PipelineConfig::default(),
        ) {
            Ok(run) => run,
            Err(e) => {
                errors.push(format!("{case}: {}", e.machine_line()));
                continue;
            }
        };
        let (r, p, m) = (run.reactants.len(), run.products.len(), run.mapping.len());
        let (created, deleted) = (run.report.created.len(), run.report.deleted.len());
        if r - deleted != m || p - created != m || deleted != edit.deleted || created != 0 {
            counts.push(case);
        }
        if run.report.initiators != edit.endpoints {
            initiators.push(case);
        }
        if !splice_consistent(&run) {
            splice.push(case);
        }
        transcript.push_str(&outputs(&run));
    }
    c.check(
        errors.is_empty(),
        format!("{} pipeline errors{}", errors.len(), listed(&errors)),
    );
    c.check(
        counts.is_empty(),
        format!("atom accounting holds in {}/50{}", 50 - counts.len(), listed(&counts)),
    );
    c.check(
        initiators.is_empty(),
        format!(
            "initiators on the new bond in {}/50{}",
            50 - initiators.len(),
            listed(&initiators)
        ),
    );
    c.check(
        splice.is_empty(),
        format!("splice consistent in {}/50{}", 50 - splice.len(), listed(&splice)),
    );
    c.outcome(transcript)
}
