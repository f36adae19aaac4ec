//! Homomorphic polynomial commitments: a transparent Pedersen basis with
//! inner-product-argument openings and batch opening, plus a trapdoor KZG
//! test double.

mod batch;
mod group;
pub mod ipa;
mod kzg;
mod msm;
mod pedersen;

pub use batch::{batch_check, batch_open, BatchProof, Query};
pub use group::{PrimeGroup, SchnorrGroup17};
pub use ipa::OpeningProof;
pub use kzg::TrapdoorKzg;
pub use msm::pippenger;
pub use pedersen::{combine, CommitKey, PolyCommitment};
