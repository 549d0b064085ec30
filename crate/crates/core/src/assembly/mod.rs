//! Circle-valued algebra: algebraic cobordisms, the E-complex, the F-hat
//! assembly, finite stages, filtered inversion and congruence checks.

mod checks;
mod filtered;
mod gamma;
pub mod json;
mod stages;

pub use checks::{diff_congruence, retraction_check, CongruenceReport, EntryDiscrepancy};
pub use filtered::{invert_filtered, FilteredEndomorphism, SimpleWitness};
pub use gamma::{AlgebraicCobordism, GammaViolation};
pub use stages::{finite_stage, projection_commutes};

use crate::chain::ChainError;
use crate::rings::RingError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssemblyError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("d_E^2 does not vanish ({} entries)", .0.len())]
    InvalidGamma(Vec<GammaViolation>),
    #[error("negative z-degree present")]
    NegativeDegreePresent,
    #[error("not a filtered endomorphism: {0}")]
    NotFilteredShape(String),
    #[error("bases differ: {0}")]
    BasisMismatch(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
