//! Fixed-point neural-network inference as a Plonkish circuit, with every
//! layer's parameters designated as one externally committed list.
//!
//! Model files are TOML:
//!
//! ```toml
//! scale_bits = 4            # fixed-point fraction bits
//!
//! [[layers]]
//! in_dim = 2
//! out_dim = 1
//! activation = "square"    # or "identity" (default)
//! weights = [3, 5]         # out_dim × in_dim, row-major
//! bias = [0]
//! ```

mod circuit;
mod model;
pub mod pipeline;

pub use circuit::{build_inference_circuit, min_k, required_rows, InferenceCircuit, InferenceWitness, LANES};
pub use model::{
    native_infer, Activation, LayerSpec, ModelSpec, MAX_PARAM_BITS, MAX_SCALE_BITS, QUOTIENT_BITS,
};

use rand::RngCore;

use crate::algebra::PrimeField;
use crate::artemis::ExternalCommitmentSet;
use crate::commit::{CommitKey, PrimeGroup};
use crate::error::Result;

/// Per-layer coefficient vectors in committed order: weights row-major,
/// then biases.
pub fn model_coefficients<F: PrimeField>(model: &ModelSpec) -> Vec<Vec<F>> {
    model
        .layers
        .iter()
        .map(|l| l.weights.iter().chain(&l.bias).map(|&v| F::from_i64(v)).collect())
        .collect()
}

/// Commits to each layer's coefficients with fresh randomness.
pub fn commit_model<G: PrimeGroup, R: RngCore + ?Sized>(
    ck_ext: &CommitKey<G>,
    model: &ModelSpec,
    rng: &mut R,
) -> Result<ExternalCommitmentSet<G>> {
    model.validate()?;
    ExternalCommitmentSet::commit(ck_ext, &model_coefficients(model), rng)
}
