//! Commit-and-prove on top of the Plonkish prover: the witness gains the
//! link gadget's columns, and the proof gains `c_μ`, `ρ` and two openings
//! tying the in-circuit evaluation to the external commitments.

use rand::RngCore;

use crate::algebra::{Coeff, Polynomial, PrimeField};
use crate::codec::{Reader, Writer};
use crate::commit::ipa::{self, OpeningProof};
use crate::commit::{CommitKey, PolyCommitment, PrimeGroup};
use crate::error::{Error, Result};
use crate::piop::{prove, verify_detailed, PlonkProof, ProverOutput, ProvingKey, Transcript, VerifyingKey, Witness};

use super::horner::{fill_copies, fill_result, HornerLayout};

/// Prover-side openings of the external commitments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitmentSecrets<F> {
    pub polys: Vec<Polynomial<F, Coeff>>,
    pub blinds: Vec<F>,
}

/// `ℓ` commitments to the committed witness polynomials, with the prover's
/// openings when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalCommitmentSet<G: PrimeGroup> {
    pub commitments: Vec<PolyCommitment<G>>,
    pub secrets: Option<CommitmentSecrets<G::Scalar>>,
}

impl<G: PrimeGroup> ExternalCommitmentSet<G> {
    /// Commits to each coefficient vector with fresh randomness; the degree
    /// bound of commitment `i` is `len_i − 1`.
    pub fn commit<R: RngCore + ?Sized>(ck: &CommitKey<G>, coeffs: &[Vec<G::Scalar>], rng: &mut R) -> Result<Self> {
        let blinds: Vec<G::Scalar> = coeffs.iter().map(|_| G::Scalar::random(&mut *rng)).collect();
        Self::commit_with(ck, coeffs, blinds)
    }

    pub fn commit_with(ck: &CommitKey<G>, coeffs: &[Vec<G::Scalar>], blinds: Vec<G::Scalar>) -> Result<Self> {
        let polys: Vec<Polynomial<G::Scalar, Coeff>> =
            coeffs.iter().map(|c| Polynomial::from_vec(c.clone())).collect();
        let commitments = polys
            .iter()
            .zip(&blinds)
            .map(|(p, r)| ck.commit(p, p.len().max(1) - 1, *r))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExternalCommitmentSet {
            commitments,
            secrets: Some(CommitmentSecrets { polys, blinds }),
        })
    }

    pub fn len(&self) -> usize {
        self.commitments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commitments.is_empty()
    }

    /// The verifier's view.
    pub fn public(&self) -> Self {
        ExternalCommitmentSet {
            commitments: self.commitments.clone(),
            secrets: None,
        }
    }

    /// Largest degree bound; the bound of every aggregated commitment.
    pub fn degree_bound(&self) -> usize {
        self.commitments.iter().map(|c| c.degree_bound).max().unwrap_or(0)
    }

    pub fn points(&self) -> Vec<G> {
        self.commitments.iter().map(|c| c.point).collect()
    }

    /// Public part only: `ℓ`, then each commitment with its degree bound.
    pub fn write(&self, w: &mut Writer) {
        w.section(b"XCOM", |s| {
            s.put_len(self.commitments.len());
            for c in &self.commitments {
                c.write(s);
            }
        });
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let mut s = r.section(b"XCOM")?;
        let n = s.get_len(8)?;
        let commitments = (0..n).map(|_| PolyCommitment::read(&mut s)).collect::<Result<Vec<_>>>()?;
        s.finish()?;
        Ok(ExternalCommitmentSet {
            commitments,
            secrets: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtemisProof<G: PrimeGroup> {
    pub c_mu: G,
    pub inner: PlonkProof<G>,
    pub rho: G::Scalar,
    /// Opening of the result column at `ω^0`.
    pub internal: OpeningProof<G>,
    /// Opening of `c_μ + Σ α^i·c_i` at `β`.
    pub external: OpeningProof<G>,
}

impl<G: PrimeGroup> ArtemisProof<G> {
    fn write_link(&self, w: &mut Writer) {
        w.section(b"LINK", |s| {
            s.put_point(&self.c_mu);
            s.put_scalar(&self.rho);
            self.internal.write(s);
            self.external.write(s);
        });
    }

    pub fn write(&self, w: &mut Writer) {
        self.inner.write(w);
        self.write_link(w);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let inner = PlonkProof::read(r)?;
        let mut s = r.section(b"LINK")?;
        let proof = ArtemisProof {
            c_mu: s.get_point()?,
            rho: s.get_scalar()?,
            internal: OpeningProof::read(&mut s)?,
            external: OpeningProof::read(&mut s)?,
            inner,
        };
        s.finish()?;
        Ok(proof)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let p = Self::read(&mut r)?;
        r.finish()?;
        Ok(p)
    }

    /// Serialized size of the linking extension `(c_μ, ρ, π̂, π)`.
    pub fn link_len(&self) -> usize {
        let mut w = Writer::new();
        self.write_link(&mut w);
        w.len()
    }
}

/// Runs the base witness, then fills the gadget's copy columns and `μ` in
/// the copy phase and the result column once `α`, `β` are known.
struct LinkedWitness<'a, W, F> {
    base: &'a mut W,
    layout: &'a HornerLayout,
    expected: Option<&'a [Polynomial<F, Coeff>]>,
    mu: F,
    psi: F,
    rho: Option<F>,
}

impl<W: Witness<F>, F: PrimeField> Witness<F> for LinkedWitness<'_, W, F> {
    fn assign_phase(&mut self, phase: u8, challenges: &[F], advice: &mut [Vec<F>]) -> Result<()> {
        self.base.assign_phase(phase, challenges, advice)?;
        if phase == self.layout.copy_phase {
            if let Some(expected) = self.expected {
                for (i, values) in self.layout.icom.values(advice).iter().enumerate() {
                    let poly = &expected[i];
                    let matches = values.len() >= poly.len()
                        && values.iter().enumerate().all(|(t, v)| *v == poly.values().get(t).copied().unwrap_or(F::ZERO));
                    if !matches {
                        return Err(Error::WitnessCommitmentMismatch(i));
                    }
                }
            }
            fill_copies(self.layout, advice, self.mu);
        }
        if phase == self.layout.rho_phase {
            let alpha = challenges[self.layout.alpha];
            let beta = challenges[self.layout.beta];
            self.rho = Some(fill_result(self.layout, advice, alpha, beta, self.psi));
        }
        Ok(())
    }
}

const LINK_LABEL: &[u8] = b"link-rho";

fn statement<G: PrimeGroup>(c_mu: G, externals: &ExternalCommitmentSet<G>) -> Vec<G> {
    let mut s = vec![c_mu];
    s.extend(externals.points());
    s
}

/// Everything [`artemis_prove`] produced, including the inner prover's
/// output for callers that inspect it.
pub struct ArtemisOutput<G: PrimeGroup> {
    pub proof: ArtemisProof<G>,
    pub inner: ProverOutput<G>,
}

#[allow(clippy::too_many_arguments)]
pub fn artemis_prove<G: PrimeGroup, W: Witness<G::Scalar>, R: RngCore + ?Sized>(
    ck: &CommitKey<G>,
    pk: &ProvingKey<G>,
    layout: &HornerLayout,
    ck_ext: &CommitKey<G>,
    instance: &[Vec<G::Scalar>],
    witness: &mut W,
    externals: &ExternalCommitmentSet<G>,
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<ArtemisOutput<G>> {
    let secrets = externals
        .secrets
        .as_ref()
        .ok_or_else(|| Error::LayoutMismatch("the prover needs the committed polynomials".into()))?;
    if externals.len() != layout.ell() {
        return Err(Error::LayoutMismatch(format!(
            "{} external commitments for {} committed lists",
            externals.len(),
            layout.ell()
        )));
    }
    let bound = externals.degree_bound();
    let mu = G::Scalar::random(&mut *rng);
    let r_mu = G::Scalar::random(&mut *rng);
    let c_mu = ck_ext.commit(&Polynomial::constant(mu), bound, r_mu)?;

    let mut linked = LinkedWitness {
        base: witness,
        layout,
        expected: Some(&secrets.polys),
        mu,
        psi: G::Scalar::random(&mut *rng),
        rho: None,
    };
    let stmt = statement(c_mu.point, externals);
    let inner = prove(ck, pk, instance, &mut linked, &stmt, transcript, rng)?;
    let rho = linked.rho.expect("result phase ran");

    let n = pk.index().n();
    transcript.absorb_scalar(LINK_LABEL, &rho);
    let rho_col = layout.rho.index;
    let rho_commitment = PolyCommitment::new(rho_commitment_point(pk.vk(), layout, &inner.proof)?, n - 1);
    let h_omega = pk.index().domain().omega().pow_u64(layout.h_omega_row() as u64);
    let internal = ipa::open(
        ck,
        transcript,
        &rho_commitment,
        &inner.advice_polys[rho_col],
        h_omega,
        rho,
        inner.advice_blinds[rho_col],
        rng,
    )?;

    let alpha = inner.challenges[layout.alpha];
    let beta = inner.challenges[layout.beta];
    let mut w_star = Polynomial::constant(mu);
    let mut r_star = r_mu;
    let mut c_star = c_mu.point;
    let mut power = alpha;
    for ((p, r), c) in secrets.polys.iter().zip(&secrets.blinds).zip(&externals.commitments) {
        w_star = w_star.add_scaled(p, power);
        r_star += *r * power;
        c_star += c.point * power;
        power *= alpha;
    }
    let external = ipa::open(
        ck_ext,
        transcript,
        &PolyCommitment::new(c_star, bound),
        &w_star,
        beta,
        rho,
        r_star,
        rng,
    )?;

    Ok(ArtemisOutput {
        proof: ArtemisProof {
            c_mu: c_mu.point,
            inner: inner.proof.clone(),
            rho,
            internal,
            external,
        },
        inner,
    })
}

fn rho_commitment_point<G: PrimeGroup>(vk: &VerifyingKey<G>, layout: &HornerLayout, proof: &PlonkProof<G>) -> Result<G> {
    let (round, pos) = vk.advice_oracles()[layout.rho.index];
    proof
        .advice_commitments
        .get(round as usize - 1)
        .and_then(|r| r.get(pos))
        .copied()
        .ok_or_else(|| Error::VerificationFailed("missing result-column commitment".into()))
}

/// Checks the inner proof, the internal opening of `ρ` and the external
/// opening of the aggregated commitment.
#[allow(clippy::too_many_arguments)]
pub fn artemis_verify<G: PrimeGroup>(
    ck: &CommitKey<G>,
    vk: &VerifyingKey<G>,
    layout: &HornerLayout,
    ck_ext: &CommitKey<G>,
    instance: &[Vec<G::Scalar>],
    externals: &ExternalCommitmentSet<G>,
    proof: &ArtemisProof<G>,
    transcript: &mut Transcript,
) -> bool {
    artemis_verify_detailed(ck, vk, layout, ck_ext, instance, externals, proof, transcript).is_ok()
}

/// Which of the three checks failed, if any.
#[allow(clippy::too_many_arguments)]
pub fn artemis_verify_detailed<G: PrimeGroup>(
    ck: &CommitKey<G>,
    vk: &VerifyingKey<G>,
    layout: &HornerLayout,
    ck_ext: &CommitKey<G>,
    instance: &[Vec<G::Scalar>],
    externals: &ExternalCommitmentSet<G>,
    proof: &ArtemisProof<G>,
    transcript: &mut Transcript,
) -> Result<()> {
    if externals.len() != layout.ell() || vk.cs().num_advice() <= layout.rho.index {
        return Err(Error::VerificationFailed("layout does not match the key".into()));
    }
    let stmt = statement(proof.c_mu, externals);
    let checked = verify_detailed(ck, vk, instance, &stmt, &proof.inner, transcript)?;

    transcript.absorb_scalar(LINK_LABEL, &proof.rho);
    let rho_commitment = PolyCommitment::new(rho_commitment_point(vk, layout, &proof.inner)?, vk.n() - 1);
    let domain = crate::algebra::EvaluationDomain::<G::Scalar>::new(vk.k())?;
    let h_omega = domain.omega().pow_u64(layout.h_omega_row() as u64);
    let internal_ok = ipa::check(ck, transcript, &rho_commitment, h_omega, proof.rho, &proof.internal);

    let alpha = checked.challenges[layout.alpha];
    let beta = checked.challenges[layout.beta];
    let mut c_star = proof.c_mu;
    let mut power = alpha;
    for c in &externals.commitments {
        c_star += c.point * power;
        power *= alpha;
    }
    let c_star = PolyCommitment::new(c_star, externals.degree_bound());
    let external_ok = ipa::check(ck_ext, transcript, &c_star, beta, proof.rho, &proof.external);
    match (internal_ok, external_ok) {
        (true, true) => Ok(()),
        (false, true) => Err(Error::VerificationFailed("internal link opening".into())),
        (true, false) => Err(Error::VerificationFailed("external link opening".into())),
        (false, false) => Err(Error::VerificationFailed("both link openings".into())),
    }
}
