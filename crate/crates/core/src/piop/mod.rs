//! The Plonkish proof system: indexing, a multi-round prover with a
//! permutation and quotient argument, and the matching verifier, all
//! driven by a Fiat-Shamir transcript.

mod constraint;
mod keys;
mod proof;
mod prover;
pub mod transcript;
mod verifier;

pub use constraint::{aggregate, query_layout, AggregateInputs, Oracle, QueryPoint};
pub use keys::{index, ProvingKey, VerifyingKey};
pub use proof::PlonkProof;
#[doc(hidden)]
pub use prover::{prove_with, ProveOptions};
pub use prover::{prove, ProverOutput, Witness};
pub use transcript::Transcript;
pub use verifier::{verify, verify_detailed, Verified};
