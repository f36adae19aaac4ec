//! End-to-end proving of committed inference under each weight-binding
//! scheme, shared by the command-line tool and the benchmarks.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

use crate::algebra::PrimeField;
use crate::artemis::{
    artemis_prove, artemis_verify, horner_index_transform, strawman_index_transform, ArtemisProof,
    ExternalCommitmentSet, HornerLayout,
};
use crate::baseline::{hash_index_transform, hash_witness_transform, HashLayout, SpongeParams, RATE, ROWS_PER_CHUNK};
use crate::codec::{Reader, Writer};
use crate::commit::{CommitKey, PrimeGroup};
use crate::error::{Error, Result};
use crate::piop::{index, prove, verify, PlonkProof, ProvingKey, Transcript, VerifyingKey};
use crate::plonkish::{CircuitIndex, BLINDING_RESERVE};

use super::{build_inference_circuit, min_k, model_coefficients, InferenceCircuit, ModelSpec};

/// Seed of the sponge parameters used by [`Scheme::Hash`].
pub const SPONGE_SEED: &[u8] = b"artemis-sponge";

/// How the proof binds the model weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Plain inference proof; weights are unbound.
    None,
    /// Horner-gate linking to external commitments.
    Artemis,
    /// Inner-product linking with explicit powers.
    Strawman,
    /// Recomputes a sponge digest of each layer in the circuit.
    Hash,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::None, Scheme::Artemis, Scheme::Strawman, Scheme::Hash];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::None => "none",
            Scheme::Artemis => "artemis",
            Scheme::Strawman => "strawman",
            Scheme::Hash => "hash",
        }
    }

    fn tag(self) -> u8 {
        self as u8
    }

    fn from_tag(tag: u8) -> Result<Self> {
        Scheme::ALL
            .get(tag as usize)
            .copied()
            .ok_or_else(|| Error::ProofDecode(format!("unknown scheme tag {tag}")))
    }

    pub fn is_linked(self) -> bool {
        matches!(self, Scheme::Artemis | Scheme::Strawman)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidModel(format!("unknown scheme {s:?}")))
    }
}

/// Domain exponent used by `scheme` for `model`: the plain circuit's size,
/// grown only when the hash rows do not fit.
pub fn scheme_k(model: &ModelSpec, scheme: Scheme) -> u32 {
    let mut base = min_k(model, 0);
    if scheme.is_linked() {
        // One Horner row plus the zero boundary and the mask row.
        while (1usize << base) < BLINDING_RESERVE + 3 {
            base += 1;
        }
    }
    if scheme != Scheme::Hash {
        return base;
    }
    let rows: usize = model
        .layers
        .iter()
        .map(|l| (l.weights.len() + l.bias.len() + 1).div_ceil(RATE) * ROWS_PER_CHUNK)
        .sum();
    let mut k = base;
    while (1usize << k) < rows.max(super::required_rows(model)) + BLINDING_RESERVE {
        k += 1;
    }
    k
}

/// Largest commitment-key degree any scheme needs for `model`.
pub fn max_degree(model: &ModelSpec) -> usize {
    let circuit = (1usize << Scheme::ALL.iter().map(|&s| scheme_k(model, s)).max().unwrap_or(0)) - 1;
    let ext = model_coefficients::<crate::Scalar>(model).iter().map(Vec::len).max().unwrap_or(1);
    circuit.max(ext.next_power_of_two() - 1)
}

#[derive(Clone, Debug)]
enum Extension<F> {
    None,
    Link(HornerLayout),
    Hash(HashLayout<F>),
}

/// Keys and layouts for proving `model`'s shape under one scheme.
pub struct Prepared<G: PrimeGroup> {
    pub scheme: Scheme,
    pub circuit: InferenceCircuit<G::Scalar>,
    pub index: CircuitIndex<G::Scalar>,
    pub pk: ProvingKey<G>,
    pub vk: VerifyingKey<G>,
    extension: Extension<G::Scalar>,
}

impl<G: PrimeGroup> Prepared<G> {
    pub fn link_layout(&self) -> Option<&HornerLayout> {
        match &self.extension {
            Extension::Link(l) => Some(l),
            _ => None,
        }
    }

    pub fn hash_layout(&self) -> Option<&HashLayout<G::Scalar>> {
        match &self.extension {
            Extension::Hash(l) => Some(l),
            _ => None,
        }
    }

    /// Grid dimensions `(rows, advice columns, fixed columns)`.
    pub fn grid(&self) -> (usize, usize, usize) {
        let cs = self.index.cs();
        (self.index.n(), cs.num_advice(), cs.num_fixed)
    }
}

/// Builds and indexes the circuit for `scheme`.
pub fn prepare<G: PrimeGroup>(ck: &CommitKey<G>, model: &ModelSpec, scheme: Scheme) -> Result<Prepared<G>> {
    let circuit = build_inference_circuit::<G::Scalar>(model, scheme_k(model, scheme))?;
    let (index_t, extension) = match scheme {
        Scheme::None => (circuit.index.clone(), Extension::None),
        Scheme::Artemis => {
            let (i, l) = horner_index_transform(&circuit.index, &circuit.icom)?;
            (i, Extension::Link(l))
        }
        Scheme::Strawman => {
            let (i, l) = strawman_index_transform(&circuit.index, &circuit.icom)?;
            (i, Extension::Link(l))
        }
        Scheme::Hash => {
            let (i, l) = hash_index_transform(&circuit.index, &circuit.icom, &SpongeParams::new(SPONGE_SEED))?;
            (i, Extension::Hash(l))
        }
    };
    let (pk, vk) = index(ck, &index_t)?;
    Ok(Prepared {
        scheme,
        circuit,
        index: index_t,
        pk,
        vk,
        extension,
    })
}

/// A proof of inference with its public instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeProof<G: PrimeGroup> {
    pub scheme: Scheme,
    /// Instance columns: inputs and outputs, then digests for the hash
    /// scheme.
    pub instance: Vec<Vec<G::Scalar>>,
    pub body: ProofBody<G>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofBody<G: PrimeGroup> {
    Plain(PlonkProof<G>),
    Linked(ArtemisProof<G>),
}

impl<G: PrimeGroup> SchemeProof<G> {
    /// Output values as field elements.
    pub fn outputs(&self, model: &ModelSpec) -> &[G::Scalar] {
        &self.instance[0][model.input_dim()..]
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.section(b"APRF", |s| {
            s.put_u8(self.scheme.tag());
            s.put_len(self.instance.len());
            for col in &self.instance {
                s.put_scalars(col);
            }
            match &self.body {
                ProofBody::Plain(p) => p.write(s),
                ProofBody::Linked(p) => p.write(s),
            }
        });
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let mut s = r.section(b"APRF")?;
        let scheme = Scheme::from_tag(s.get_u8()?)?;
        let cols = s.get_len(8)?;
        let instance = (0..cols).map(|_| s.get_scalars()).collect::<Result<Vec<_>>>()?;
        let body = if scheme.is_linked() {
            ProofBody::Linked(ArtemisProof::read(&mut s)?)
        } else {
            ProofBody::Plain(PlonkProof::read(&mut s)?)
        };
        s.finish()?;
        r.finish()?;
        Ok(SchemeProof { scheme, instance, body })
    }

    /// Bytes of the proof body alone.
    pub fn body_len(&self) -> usize {
        let mut w = Writer::new();
        match &self.body {
            ProofBody::Plain(p) => p.write(&mut w),
            ProofBody::Linked(p) => p.write(&mut w),
        }
        w.len()
    }
}

/// Proves inference of `model` on `input`. Linked schemes need the
/// model's commitments with their openings.
#[allow(clippy::too_many_arguments)]
pub fn prove_inference<G: PrimeGroup, R: RngCore + ?Sized>(
    ck: &CommitKey<G>,
    prepared: &Prepared<G>,
    model: &ModelSpec,
    input: &[i64],
    commitments: Option<&ExternalCommitmentSet<G>>,
    protocol: &[u8],
    rng: &mut R,
) -> Result<SchemeProof<G>> {
    let wit = prepared.circuit.witness(model, input)?;
    let mut transcript = Transcript::new(protocol);
    let (instance, body) = match &prepared.extension {
        Extension::None => {
            let mut asg = wit.assignment;
            let out = prove(ck, &prepared.pk, &wit.instance, &mut asg, &[], &mut transcript, rng)?;
            (wit.instance, ProofBody::Plain(out.proof))
        }
        Extension::Hash(layout) => {
            let (mut asg, digests) = hash_witness_transform(&wit.assignment, &prepared.index, layout)?;
            let instance = layout.extend_instance(&wit.instance, &digests);
            let out = prove(ck, &prepared.pk, &instance, &mut asg, &[], &mut transcript, rng)?;
            (instance, ProofBody::Plain(out.proof))
        }
        Extension::Link(layout) => {
            let ext = commitments.ok_or_else(|| Error::LayoutMismatch("linked schemes need commitments".into()))?;
            let mut asg = wit.assignment;
            let out = artemis_prove(ck, &prepared.pk, layout, ck, &wit.instance, &mut asg, ext, &mut transcript, rng)?;
            (wit.instance, ProofBody::Linked(out.proof))
        }
    };
    Ok(SchemeProof {
        scheme: prepared.scheme,
        instance,
        body,
    })
}

/// Checks `proof` against the prepared keys and, for linked schemes, the
/// public commitments.
pub fn verify_inference<G: PrimeGroup>(
    ck: &CommitKey<G>,
    prepared: &Prepared<G>,
    proof: &SchemeProof<G>,
    commitments: Option<&ExternalCommitmentSet<G>>,
    protocol: &[u8],
) -> bool {
    if proof.scheme != prepared.scheme || proof.instance.is_empty() {
        return false;
    }
    let mut transcript = Transcript::new(protocol);
    match (&prepared.extension, &proof.body) {
        (Extension::None | Extension::Hash(_), ProofBody::Plain(p)) => {
            verify(ck, &prepared.vk, &proof.instance, &[], p, &mut transcript)
        }
        (Extension::Link(layout), ProofBody::Linked(p)) => match commitments {
            Some(ext) => artemis_verify(ck, &prepared.vk, layout, ck, &proof.instance, ext, p, &mut transcript),
            None => false,
        },
        _ => false,
    }
}

/// Reads a field element as a signed integer, if it or its negation fits
/// in 63 bits.
pub fn scalar_to_i64<F: PrimeField>(v: F) -> Option<i64> {
    let small = |x: F| {
        let bytes = x.to_le_bytes();
        if bytes[8..].iter().any(|&b| b != 0) {
            return None;
        }
        let u = u64::from_le_bytes(bytes[..8].try_into().expect("eight bytes"));
        i64::try_from(u).ok()
    };
    small(v).or_else(|| small(-v).map(|m| -m))
}
