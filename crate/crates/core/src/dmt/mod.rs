//! Discrete Morse theory on finite CW complexes.

pub mod blocks;
mod cell;
mod circle;
mod collar;
mod domain;
mod field;
mod morse;
mod square;


pub use cell::{level_id, prism_id, Cell, CellComplex, CellComplexDoc};
pub use circle::{circle_morse, circle_novikov, CircleFunction, CircleFunctionDoc, CriticalPoint, CriticalPointDoc};
pub use collar::{collar_cobordism, collar_composite, collar_composite_is_triangular, cobordism_triple, continuation, insert_splitting_collar, Collar, SplitManifold, SplitReading, COLLAR_LENGTH};
pub use domain::{map_to_novikov, to_novikov, CollarDoc, FundamentalDomain, FundamentalDomainDoc};
pub use field::{all_acyclic_fields, critical_cells, critical_counts, morse_heights, random_acyclic_field, validate_field, FieldReport, Role, VectorField};
pub use morse::{morse_complex, Flow};
pub use square::{double_cylinder, square_cell_id, square_complex, Square};

use crate::assembly::AssemblyError;
use crate::chain::ChainError;
use crate::cobordism::CobordismError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DmtError {
    #[error("duplicate facet {0}")]
    DuplicateFacet(String),
    #[error("duplicate cell `{0}`")]
    DuplicateCell(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("`{face}` cannot be a face of `{cell}`")]
    BadFace { cell: String, face: String },
    #[error("boundary of boundary of `{cell}` hits `{face}`")]
    NotSquareZero { cell: String, face: String },
    #[error("invalid vector field: {}", .0.join("; "))]
    InvalidField(Vec<String>),
    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),
    #[error("collar pattern violated: {0}")]
    CollarPattern(String),
    #[error("not an alternating circle function: {0}")]
    NotAlternating(String),
    #[error("winding {0} does not fit this construction")]
    WrongWinding(u32),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Cobordism(#[from] CobordismError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}
