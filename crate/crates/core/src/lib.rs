//! Exact chain-level Morse and Novikov constructions.
//!
//! The crate is organised bottom-up:
//!
//! * [`rings`]: twisted group rings, Laurent polynomials and truncated
//!   Novikov series,
//! * [`matrix`] and [`chain`]: based free chain complexes, chain maps,
//!   mapping cones and homology,
//! * [`cobordism`]: real-valued cobordism blocks, splittings and gluing,
//! * [`assembly`]: circle-valued assembly of the Novikov complex,
//! * [`dmt`]: discrete Morse theory on finite CW complexes, which produces
//!   the ground-truth flow counts the algebra is checked against,
//! * [`corpus`]: the standard example complexes.

pub mod rings;
pub mod matrix;
pub mod chain;
pub mod cobordism;
pub mod assembly;
pub mod dmt;
pub mod corpus;

#[cfg(test)]
mod testutil;

