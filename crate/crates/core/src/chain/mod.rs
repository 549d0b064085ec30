//! Based free chain complexes, chain maps, homotopies, mapping cones and
//! homology.

mod basis;
mod complex;
mod homology;
pub mod json;
mod maps;
mod novikov_rank;

pub use basis::{GradedBasis, Label, ValueFiltration};
pub use complex::{ChainComplex, SquareDefect};
pub use homology::{homology_z, integer_rank, smith_diagonal, HomologyGroup};
pub use maps::{cone_iso, mapping_cone, ChainHomotopy, ChainMap, MapDefect, MapRelation};
pub use novikov_rank::{novikov_rank, novikov_ranks};

use crate::rings::RingError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChainError {
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a chain map ({} defects)", .0.len())]
    NotAChainMap(Vec<MapDefect>),
    #[error("homotopy identity d psi + psi d = to - from fails")]
    HomotopyIdentityFails,
    #[error("operation needs different coefficients")]
    WrongCoefficients,
    #[error("precision exhausted: pivot decision needs degree {needed}, entries known to {available}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[cfg(test)]
mod tests;
