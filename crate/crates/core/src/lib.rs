//! Fuzzy and neutrosophic cognitive maps, relational maps, BAM dynamics,
//! map composition and CETD profiling.

pub mod cetd;
pub mod cli;
pub mod compose;
pub mod concept;
pub mod dynamics;
pub mod io;
pub mod neutro;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Neutro(#[from] neutro::NeutroError),
    #[error(transparent)]
    Concept(#[from] concept::ConceptError),
    #[error(transparent)]
    Dynamics(#[from] dynamics::DynamicsError),
    #[error(transparent)]
    Compose(#[from] compose::ComposeError),
    #[error(transparent)]
    Cetd(#[from] cetd::CetdError),
    #[error("{}: {err}", path.display())]
    Format {
        path: PathBuf,
        err: io::format::FormatError,
    },
    #[error(transparent)]
    Scenario(#[from] io::scenario::ScenarioError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable tag used in diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Neutro(_) => "arith",
            Error::Concept(_) => "concept",
            Error::Dynamics(_) => "dynamics",
            Error::Compose(_) => "compose",
            Error::Cetd(_) => "cetd",
            Error::Format { .. } => "parse",
            Error::Scenario(_) => "scenario",
            Error::Io { .. } => "io",
            Error::Invalid(_) => "invalid",
        }
    }
}

pub use cetd::{cetd_profile, CetdParams, CetdProfile, RawDataTable};
pub use compose::{assemble_disjoint, assemble_overlap, combine, link, BlockPlan, LinkRule};
pub use concept::{from_edges, validate, zero_state, ConceptSpace, ConnectionMatrix, MatrixKind, StateVector};
pub use dynamics::{
    run_bam, run_cognitive, run_relational, BamConfig, HiddenPattern, PatternKind, RelationalPattern, Side,
};
pub use neutro::{collapse, NeutroValue, ThresholdPolicy, TriState};
