//! Builds `fix bond/react` reaction templates from LAMMPS data files.
//!
//! Reactant and product molecules are read into two graphs. Atoms that keep
//! their type, mass and bonding are paired by a common sub-graph search,
//! the rest by neighborhood similarity and an assignment solve. The bond
//! changes between the paired graphs locate the reaction site, whose
//! neighborhood is written out as pre/post molecule templates and a map.

pub mod analysis;
pub mod cli;
pub mod conserved;
mod error;
pub mod graph;
pub mod lammps;
pub mod mapping;
pub mod pipeline;
pub mod similarity;
pub mod template;

pub use error::{Error, Result};
pub use pipeline::{run_pipeline, DotStage, PipelineConfig, PipelineRun};
