use std::path::PathBuf;

use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::conserved::MappingError;
use crate::graph::GraphError;
use crate::lammps::{MapFileError, ParseError};
use crate::similarity::WeightError;
use crate::template::TemplateError;

/// Any failure of a full run.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("unknown stage '{0}', expected reactants, products or mapped")]
    UnknownStage(String),
}

impl From<MapFileError> for Error {
    fn from(e: MapFileError) -> Self {
        Error::Template(TemplateError::Map(e))
    }
}

impl Error {
    /// Stable, machine-readable name of the failure.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Config(_) | Error::Weights(_) => "config",
            Error::Graph(_) | Error::Analysis(AnalysisError::Graph(_)) => "graph",
            Error::Mapping(MappingError::NoCommonSubgraph) => "no-common-subgraph",
            Error::Mapping(MappingError::BudgetExceeded { .. }) => "budget-exceeded",
            Error::Analysis(AnalysisError::NoReactionDetected) => "no-reaction-detected",
            Error::Analysis(AnalysisError::UnsupportedReaction { .. }) => "unsupported-reaction",
            Error::Template(TemplateError::InconsistentPruning(_)) => "inconsistent-pruning",
            Error::Template(TemplateError::Map(_)) => "invalid-map",
            Error::UnknownStage(_) => "unknown-stage",
        }
    }

    /// Process exit status. 1 and 2 stay reserved for panics and usage
    /// errors.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            "io" => 3,
            "parse" => 4,
            "config" => 5,
            "graph" => 6,
            "no-common-subgraph" => 7,
            "budget-exceeded" => 8,
            "no-reaction-detected" => 9,
            "unsupported-reaction" => 10,
            "inconsistent-pruning" => 11,
            "invalid-map" => 12,
            "unknown-stage" => 13,
            _ => 1,
        }
    }

    /// One line, `key=value` fields, message JSON-quoted.
    pub fn machine_line(&self) -> String {
        let message = serde_json::to_string(&self.to_string()).unwrap_or_default();
        format!(
            "error class={} code={} message={message}",
            self.class(),
            self.exit_code()
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
