//! The full run, from parsed topologies to templates and reports.

use std::fmt::Write;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::analysis::{analyze_reaction, DeltaNeighbor, ReactionReport, DEFAULT_CENTRALITY_WEIGHT};
use crate::conserved::{iterate_conserved, Fragment, DEFAULT_ITERATIONS, DEFAULT_SEARCH_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{mapping_to_dot, to_dot, NodeClass, NodeId, Side, UnifiedGraph};
use crate::lammps::{write_map_file, write_molecule_template, SystemTopology};
use crate::mapping::{AtomMapping, Provenance};
use crate::similarity::{
    build_cost_matrix, refine_symmetric_paths, solve_assignment, swap_hydrogens, Normalization, Scorer, ScoringWeights,
    SimilarityMatrix, DEFAULT_HYDROGEN_TOLERANCE,
};
use crate::template::{assemble_templates, ReactionTemplates, DEFAULT_CUTOFF};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub weights: ScoringWeights,
    pub iterations: usize,
    pub cutoff: usize,
    pub budget: u64,
    pub hydrogen_tolerance: f64,
    pub centrality_weight: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            weights: ScoringWeights::default(),
            iterations: DEFAULT_ITERATIONS,
            cutoff: DEFAULT_CUTOFF,
            budget: DEFAULT_SEARCH_BUDGET,
            hydrogen_tolerance: DEFAULT_HYDROGEN_TOLERANCE,
            centrality_weight: DEFAULT_CENTRALITY_WEIGHT,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.cutoff == 0 {
            return Err(Error::Config("cutoff must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::Config("search budget must be positive".into()));
        }
        if !(self.hydrogen_tolerance.is_finite() && self.hydrogen_tolerance >= 0.0) {
            return Err(Error::Config("hydrogen tolerance must be a non-negative number".into()));
        }
        if !(self.centrality_weight.is_finite() && self.centrality_weight >= 0.0) {
            return Err(Error::Config("centrality weight must be a non-negative number".into()));
        }
        Ok(())
    }
}

/// Which graph a DOT export shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DotStage {
    Reactants,
    Products,
    Mapped,
}

impl DotStage {
    pub const ALL: [DotStage; 3] = [DotStage::Reactants, DotStage::Products, DotStage::Mapped];

    pub fn name(self) -> &'static str {
        match self {
            DotStage::Reactants => "reactants",
            DotStage::Products => "products",
            DotStage::Mapped => "mapped",
        }
    }
}

impl FromStr for DotStage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DotStage::ALL
            .into_iter()
            .find(|stage| stage.name() == s)
            .ok_or_else(|| Error::UnknownStage(s.to_string()))
    }
}

/// The similarity stage, when there was anything left to assign.
#[derive(Debug, Clone)]
pub struct SimilarityStage {
    pub matrix: SimilarityMatrix,
    pub normalization: Normalization,
    pub assignment_cost: f64,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub config: PipelineConfig,
    pub reactants: UnifiedGraph,
    pub products: UnifiedGraph,
    pub fragments: Vec<Fragment>,
    pub expansions: u64,
    pub similarity: Option<SimilarityStage>,
    pub mapping: AtomMapping,
    pub report: ReactionReport,
    pub templates: ReactionTemplates,
}

pub fn run_pipeline(
    reactants: &[SystemTopology],
    products: &[SystemTopology],
    config: &PipelineConfig,
) -> Result<PipelineRun> {
    config.validate()?;
    if reactants.is_empty() || products.is_empty() {
        return Err(Error::Config("need at least one reactant and one product".into()));
    }
    let g_r = UnifiedGraph::build(reactants, Side::Reactant)?;
    let g_p = UnifiedGraph::build(products, Side::Product)?;
    log::info!(
        "{} reactant atoms in {} molecules, {} product atoms in {} molecules",
        g_r.len(),
        g_r.component_count(),
        g_p.len(),
        g_p.component_count()
    );

    let conserved = iterate_conserved(&g_r, &g_p, config.iterations, config.budget)?;
    log::info!(
        "conserved: {} pairs over {} iterations, {} of {} search expansions used, ties to the smallest global-id pairs",
        conserved.mapping.len(),
        conserved.fragments.len(),
        conserved.expansions,
        config.budget
    );
    let mut mapping = conserved.mapping;

    let w = config.weights;
    log::info!("similarity weights alpha={} beta={} gamma={}", w.alpha, w.beta, w.gamma);
    let scorer = Scorer::new(&g_r, &g_p, config.weights);
    let rows = mapping.unmapped_reactants();
    let cols = mapping.unmapped_products();
    let similarity = if rows.is_empty() || cols.is_empty() {
        None
    } else {
        let matrix = SimilarityMatrix::compute(&scorer, &rows, &cols);
        let cost = build_cost_matrix(&matrix);
        let assignment = solve_assignment(&cost);
        log::info!(
            "assignment over {}x{} costs ({} normalization) pairs {} atoms at cost {:.6}",
            cost.rows,
            cost.cols,
            cost.normalization.method,
            assignment.pairs.len(),
            assignment.cost
        );
        for &(i, j) in &assignment.pairs {
            mapping.insert(rows[i], cols[j], Provenance::Similarity);
        }
        Some(SimilarityStage {
            matrix,
            normalization: cost.normalization,
            assignment_cost: assignment.cost,
        })
    };

    let mapping = refine_symmetric_paths(mapping, &g_r, &g_p, &scorer);
    let mapping = swap_hydrogens(mapping, &g_r, &g_p, config.hydrogen_tolerance);
    log::info!(
        "refinement: {} path-refined and {} hydrogen-swapped pairs (hydrogen tolerance {} amu)",
        mapping.pairs().filter(|p| p.2 == Provenance::PathRefined).count(),
        mapping.pairs().filter(|p| p.2 == Provenance::HydrogenSwapped).count(),
        config.hydrogen_tolerance
    );

    let report = analyze_reaction(&mapping, &g_r, &g_p, config.centrality_weight)?;
    log::info!(
        "initiators {} and {} (centrality weight {}, ties to the smallest id), {} created, {} deleted",
        report.initiators[0],
        report.initiators[1],
        report.centrality_weight,
        report.created.len(),
        report.deleted.len()
    );
    let templates = assemble_templates(&mapping, &report, &g_r, &g_p, reactants, products, config.cutoff)?;
    log::info!(
        "templates: {} pre atoms, {} post atoms, {} edge atoms at cutoff {}",
        templates.pre_nodes.len(),
        templates.post_nodes.len(),
        templates.edge_atoms.len(),
        config.cutoff
    );

    Ok(PipelineRun {
        config: *config,
        reactants: g_r,
        products: g_p,
        fragments: conserved.fragments,
        expansions: conserved.expansions,
        similarity,
        mapping,
        report,
        templates,
    })
}

fn atom_json(g: &UnifiedGraph, v: NodeId) -> Value {
    let n = g.node(v);
    json!({ "global": v.global_id(), "molecule": n.component, "atom": n.source_id })
}

impl PipelineRun {
    pub fn pre_template(&self) -> String {
        write_molecule_template(&self.templates.pre)
    }

    pub fn post_template(&self) -> String {
        write_molecule_template(&self.templates.post)
    }

    pub fn map_file(&self) -> String {
        write_map_file(&self.templates.map).expect("assembled maps are validated")
    }

    pub fn similarity_csv(&self) -> Option<String> {
        self.similarity.as_ref().map(|s| s.matrix.to_csv())
    }

    fn reactant_class(&self, v: NodeId) -> NodeClass {
        if self.report.initiators.contains(&v) {
            NodeClass::Initiator
        } else {
            match self.mapping.provenance(v) {
                None => NodeClass::Deleted,
                Some(p) if p.is_conserved() => NodeClass::Conserved,
                Some(_) => NodeClass::SimilarityMapped,
            }
        }
    }

    fn product_class(&self, x: NodeId) -> NodeClass {
        match self.mapping.preimage(x) {
            None => NodeClass::Created,
            Some(v) => self.reactant_class(v),
        }
    }

    pub fn dot(&self, stage: DotStage) -> String {
        match stage {
            DotStage::Reactants => to_dot(&self.reactants, "reactants", |v| self.reactant_class(v)),
            DotStage::Products => to_dot(&self.products, "products", |x| self.product_class(x)),
            DotStage::Mapped => {
                let pairs: Vec<(NodeId, NodeId)> = self.mapping.pairs().map(|(a, x, _)| (a, x)).collect();
                mapping_to_dot(
                    "mapped",
                    &self.reactants,
                    |v| self.reactant_class(v),
                    &self.products,
                    |x| self.product_class(x),
                    &pairs,
                )
            }
        }
    }

    fn count(&self, pred: impl Fn(Provenance) -> bool) -> usize {
        self.mapping.pairs().filter(|p| pred(p.2)).count()
    }

    pub fn report_json(&self) -> String {
        let (g_r, g_p) = (&self.reactants, &self.products);
        let pairs: Vec<Value> = self
            .report
            .pairs
            .iter()
            .map(|c| {
                let gained: Vec<Value> = c
                    .delta_e
                    .gained
                    .iter()
                    .map(|d| match d {
                        DeltaNeighbor::Reactant(u) => json!({ "reactant": u.global_id() }),
                        DeltaNeighbor::Created(y) => json!({ "created": y.global_id() }),
                    })
                    .collect();
                let lost: Vec<usize> = c.delta_e.lost.iter().map(|u| u.global_id()).collect();
                json!({
                    "reactant": atom_json(g_r, c.reactant),
                    "product": atom_json(g_p, c.product),
                    "provenance": c.provenance,
                    "delta_e": { "size": c.delta_e.len(), "gained": gained, "lost": lost },
                    "delta_c": c.delta_c,
                })
            })
            .collect();
        let t = &self.templates;
        let doc = json!({
            "schema": "templater-report/1",
            "config": {
                "weights": self.config.weights,
                "iterations": self.config.iterations,
                "cutoff": self.config.cutoff,
                "search_budget": self.config.budget,
                "hydrogen_tolerance": self.config.hydrogen_tolerance,
                "centrality_weight": self.config.centrality_weight,
            },
            "atoms": { "reactants": g_r.len(), "products": g_p.len() },
            "conserved": {
                "pairs": self.mapping.conserved_count(),
                "fragments": self.fragments,
                "search_expansions": self.expansions,
            },
            "similarity": self.similarity.as_ref().map(|s| json!({
                "rows": s.matrix.rows.len(),
                "cols": s.matrix.cols.len(),
                "normalization": s.normalization,
                "assignment_cost": s.assignment_cost,
            })),
            "mapping": {
                "pairs": self.mapping.len(),
                "similarity": self.count(|p| p == Provenance::Similarity),
                "path_refined": self.count(|p| p == Provenance::PathRefined),
                "hydrogen_swapped": self.count(|p| p == Provenance::HydrogenSwapped),
            },
            "initiators": self.report.initiators.map(|v| atom_json(g_r, v)),
            "created": self.report.created.iter().map(|&v| atom_json(g_p, v)).collect::<Vec<_>>(),
            "deleted": self.report.deleted.iter().map(|&v| atom_json(g_r, v)).collect::<Vec<_>>(),
            "templates": {
                "numbering": "ascending global id",
                "deleted_atoms": "pre template only",
                "created_atoms": "post template only",
                "pre_atoms": t.pre_nodes.iter().map(|v| v.global_id()).collect::<Vec<_>>(),
                "post_atoms": t.post_nodes.iter().map(|v| v.global_id()).collect::<Vec<_>>(),
                "edge_atoms": t.edge_atoms.iter().map(|v| v.global_id()).collect::<Vec<_>>(),
            },
            "pairs": pairs,
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn report_text(&self) -> String {
        let (g_r, g_p) = (&self.reactants, &self.products);
        let describe = |g: &UnifiedGraph, v: NodeId| {
            let n = g.node(v);
            format!("{v} (molecule {} atom {})", n.component, n.source_id)
        };
        let mut out = String::new();
        let _ = writeln!(out, "reactant atoms   {}", g_r.len());
        let _ = writeln!(out, "product atoms    {}", g_p.len());
        let _ = writeln!(out, "conserved pairs  {}", self.mapping.conserved_count());
        for f in &self.fragments {
            let _ = writeln!(
                out,
                "  iteration {}: {} atoms, reactant molecule {} -> product molecule {}",
                f.iteration, f.size, f.reactant_component, f.product_component
            );
        }
        let _ = writeln!(out, "mapped pairs     {}", self.mapping.len());
        let _ = writeln!(out, "created atoms    {}", self.report.created.len());
        for &v in &self.report.created {
            let _ = writeln!(out, "  {}", describe(g_p, v));
        }
        let _ = writeln!(out, "deleted atoms    {}", self.report.deleted.len());
        for &v in &self.report.deleted {
            let _ = writeln!(out, "  {}", describe(g_r, v));
        }
        let _ = writeln!(out, "initiators");
        for &v in &self.report.initiators {
            let _ = writeln!(out, "  {}", describe(g_r, v));
        }
        let t = &self.templates;
        let _ = writeln!(
            out,
            "pre template     {} atoms, {} edge atoms (cutoff {})",
            t.pre_nodes.len(),
            t.edge_atoms.len(),
            t.cutoff
        );
        let _ = writeln!(out, "post template    {} atoms", t.post_nodes.len());
        let _ = writeln!(out, "bond changes");
        for c in self.report.changed() {
            let _ = writeln!(
                out,
                "  {} -> {}: |dE| = {}, dC = {:.6}",
                c.reactant,
                c.product,
                c.delta_e.len(),
                c.delta_c
            );
        }
        out
    }
}
