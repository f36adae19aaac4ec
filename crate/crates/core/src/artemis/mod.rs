//! Linking Plonkish witnesses to external polynomial commitments.
//!
//! The index transform appends a gadget that evaluates a random linear
//! combination of the committed witness lists at a challenge point inside
//! the circuit; the prover then opens the matching combination of external
//! commitments at the same point. [`Gadget::Strawman`] materialises the
//! powers of the point instead of nesting them, for comparison.

mod apollo;
mod horner;
mod link;

pub use apollo::{apollo_align_transform, apollo_witness_transform};
pub use horner::{
    horner_index_transform, horner_index_transform_with_columns, horner_witness_transform, strawman_index_transform,
    strawman_index_transform_with_columns, Gadget, HornerLayout,
};
pub use link::{
    artemis_prove, artemis_verify, artemis_verify_detailed, ArtemisOutput, ArtemisProof, CommitmentSecrets,
    ExternalCommitmentSet,
};
