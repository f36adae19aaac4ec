//! Fiat-Shamir transcript over SHA-256.
//!
//! Every message is framed as `kind ‖ label length ‖ label ‖ data length ‖
//! data`, so no two distinct message sequences hash the same. A challenge
//! absorbs its own frame before being derived, so two consecutive squeezes
//! with the same label still differ.

use sha2::{Digest, Sha256};

use crate::algebra::PrimeField;
use crate::commit::PrimeGroup;
use crate::error::{Error, Result};

const KIND_BYTES: u8 = b'B';
const KIND_SCALAR: u8 = b'S';
const KIND_POINT: u8 = b'P';
const KIND_CHALLENGE: u8 = b'C';

#[derive(Clone, Debug)]
pub struct Transcript {
    state: Sha256,
    phase: u8,
}

impl Transcript {
    /// Starts a transcript bound to a protocol name.
    pub fn new(protocol: &[u8]) -> Self {
        let mut t = Transcript {
            state: Sha256::new(),
            phase: 0,
        };
        t.frame(b'D', b"protocol", protocol);
        t
    }

    fn frame(&mut self, kind: u8, label: &[u8], data: &[u8]) {
        self.state.update([kind]);
        self.state.update((label.len() as u64).to_le_bytes());
        self.state.update(label);
        self.state.update((data.len() as u64).to_le_bytes());
        self.state.update(data);
    }

    pub fn absorb_bytes(&mut self, label: &[u8], data: &[u8]) {
        self.frame(KIND_BYTES, label, data);
    }

    pub fn absorb_scalar<F: PrimeField>(&mut self, label: &[u8], v: &F) {
        self.frame(KIND_SCALAR, label, &v.to_le_bytes());
    }

    pub fn absorb_scalars<F: PrimeField>(&mut self, label: &[u8], vs: &[F]) {
        for v in vs {
            self.absorb_scalar(label, v);
        }
    }

    pub fn absorb_point<G: PrimeGroup>(&mut self, label: &[u8], p: &G) {
        self.frame(KIND_POINT, label, &p.to_bytes());
    }

    pub fn absorb_points<G: PrimeGroup>(&mut self, label: &[u8], ps: &[G]) {
        for p in ps {
            self.absorb_point(label, p);
        }
    }

    /// Squeezes a field element by reducing 64 hash bytes modulo `p`.
    pub fn challenge<F: PrimeField>(&mut self, label: &[u8]) -> F {
        F::from_uniform_bytes(&self.squeeze(label))
    }

    /// Squeezes a challenge of at most 128 bits (reduced modulo `p` in
    /// smaller fields), for rounds where a short scalar is cheaper.
    pub fn short_challenge<F: PrimeField>(&mut self, label: &[u8]) -> F {
        let mut wide = self.squeeze(label);
        wide[16..].fill(0);
        F::from_uniform_bytes(&wide)
    }

    fn squeeze(&mut self, label: &[u8]) -> [u8; 64] {
        self.frame(KIND_CHALLENGE, label, &[]);
        let seed = self.state.clone().finalize();
        let mut wide = [0u8; 64];
        for (i, half) in wide.chunks_mut(32).enumerate() {
            let block = Sha256::new()
                .chain_update(seed)
                .chain_update([i as u8])
                .finalize();
            half.copy_from_slice(&block);
        }
        wide
    }

    /// The phase whose commitments are currently accepted.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Absorbs a commitment produced in `phase`. Commitments for a phase
    /// that is already closed, or not yet opened, are rejected: they would
    /// let the prover choose a column after seeing the challenges it
    /// depends on.
    pub fn absorb_phase_commitment<G: PrimeGroup>(
        &mut self,
        phase: u8,
        label: &[u8],
        p: &G,
    ) -> Result<()> {
        if phase != self.phase {
            return Err(Error::TranscriptOutOfOrder {
                current: self.phase,
                got: phase,
            });
        }
        self.absorb_point(label, p);
        Ok(())
    }

    /// Closes `phase`; subsequent phase commitments must belong to the next
    /// phase.
    pub fn close_phase(&mut self, phase: u8) -> Result<()> {
        if phase != self.phase {
            return Err(Error::TranscriptOutOfOrder {
                current: self.phase,
                got: phase,
            });
        }
        self.frame(b'E', b"end-phase", &[phase]);
        self.phase += 1;
        Ok(())
    }
}
