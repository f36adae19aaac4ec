//! The recompute-in-circuit baseline: hash every committed weight list with
//! an algebraic sponge inside the circuit and expose the digests as public
//! inputs.
//!
//! The sponge is Poseidon-shaped but uses reduced, seed-derived parameters;
//! it reproduces the row cost of the approach, not its security.

mod circuit;
mod sponge;

pub use circuit::{hash_index_transform, hash_witness_transform, HashLayout, ROWS_PER_CHUNK};
pub use sponge::{sponge_hash, SpongeParams, FULL_ROUNDS, PARTIAL_ROUNDS, RATE, WIDTH};
