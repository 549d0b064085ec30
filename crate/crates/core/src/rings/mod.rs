//! Group rings Z[Z^k] with a monodromy twist, Laurent polynomials and
//! precision-truncated Novikov series.

mod context;
mod group_ring;
mod series;
mod text;

pub use context::RingContext;
pub use group_ring::GroupRingElement;
pub use series::{LaurentPolynomial, NovikovElement, Precision, UnitWitness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("ring contexts differ")]
    ContextMismatch,
    #[error("element has terms of negative z-degree")]
    NegativeDegreePresent,
    #[error("element is zero")]
    ZeroElement,
    #[error("element is not a unit")]
    NotUnit,
    #[error("precision too low to determine the requested coefficient")]
    InsufficientPrecision,
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("cannot parse ring element `{0}`")]
    Parse(String),
}
