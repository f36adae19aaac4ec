//! Commit-and-prove SNARKs over homomorphic polynomial commitments.
//!
//! A Plonkish proof system (advice phases, custom gates, permutation
//! argument, quotient argument, batch opening) compiled with a transparent
//! inner-product-argument commitment, extended with a Horner-evaluation
//! gate that links witness cells to external commitments in constant proof
//! size. Baselines and a fixed-point inference demo sit on top.
//!
//! Everything is generic over [`algebra::PrimeField`] and
//! [`commit::PrimeGroup`]; the aliases below fix the Pallas instantiation
//! used by the command-line tool.

pub mod algebra;
pub mod artemis;
pub mod baseline;
pub mod codec;
pub mod commit;
pub mod error;
pub mod piop;
pub mod plonkish;
pub mod zkml;

pub use error::{Error, Result};

/// Scalar field of the reference instantiation.
pub type Scalar = pasta_curves::pallas::Scalar;
/// Group of the reference instantiation.
pub type Point = pasta_curves::pallas::Point;
