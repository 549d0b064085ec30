//! Real-valued structures: cobordism triples, attaching cones, splitting
//! complexes, and the gluing, setting and triangularity checks.

mod checks;
pub mod json;
mod splitting;
mod triple;

pub use checks::{
    glue_check, setting_check, triangularity_check, triangularity_in_order, GlueReport, SettingReport,
    SettingViolation, SquarePartition,
};
pub use splitting::{AttachingCone, SplittingComplex, SplittingData};
pub use triple::{IdentityViolation, MorseTriple, TripleIdentity};

use crate::chain::{ChainError, MapDefect};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CobordismError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{} identity violations, first: {}", .0.len(), .0.first().map(|v| v.to_string()).unwrap_or_default())]
    IdentityViolation(Vec<IdentityViolation>),
    #[error("cobordism has interior critical cells (F is not zero)")]
    NotSimple,
    #[error("`{name}` is not a chain map ({} defects)", .defects.len())]
    NotAChainMap { name: String, defects: Vec<MapDefect> },
    #[error("no attaching map given")]
    MissingAttachingMap,
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[cfg(test)]
mod tests;
