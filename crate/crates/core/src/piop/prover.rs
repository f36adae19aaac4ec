use rand::RngCore;

use crate::algebra::{
    batch_invert, blind_lagrange, Coeff, ExtendedLagrangeCoeff, Polynomial, PrimeField,
};
use crate::commit::{batch_open, CommitKey, PolyCommitment, PrimeGroup, Query};
use crate::error::{Error, Result};
use crate::plonkish::{pad_instance, permutation, Assignment, Column, ColumnKind};

use super::constraint::{aggregate, query_layout, AggregateInputs, Oracle, QueryPoint};
use super::verifier::{quotient_at, AggregateChallenges};
use super::keys::{ProvingKey, VerifyingKey};
use super::proof::PlonkProof;
use super::Transcript;

/// Supplies advice values one commitment phase at a time, so later phases
/// can depend on challenges issued after earlier ones.
pub trait Witness<F> {
    /// Fills the advice columns of `phase` (other columns may be left
    /// untouched). `challenges[i]` holds every challenge issued before
    /// `phase`; later entries are zero.
    fn assign_phase(&mut self, phase: u8, challenges: &[F], advice: &mut [Vec<F>]) -> Result<()>;
}

impl<F: PrimeField> Witness<F> for Assignment<F> {
    fn assign_phase(&mut self, phase: u8, _challenges: &[F], advice: &mut [Vec<F>]) -> Result<()> {
        if phase == 0 {
            // Circuit transforms may append columns the base assignment
            // does not know about; those are filled by their own witness.
            if self.advice.len() > advice.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} advice columns assigned, circuit has {}",
                    self.advice.len(),
                    advice.len()
                )));
            }
            for (dst, src) in advice.iter_mut().zip(&self.advice) {
                let len = src.len().min(dst.len());
                dst[..len].copy_from_slice(&src[..len]);
            }
        }
        Ok(())
    }
}

/// Everything the prover produced, for callers that extend the proof with
/// further openings of the committed columns.
#[derive(Clone, Debug)]
pub struct ProverOutput<G: PrimeGroup> {
    pub proof: PlonkProof<G>,
    /// Blinded advice polynomials, by advice column index.
    pub advice_polys: Vec<Polynomial<G::Scalar, Coeff>>,
    pub advice_blinds: Vec<G::Scalar>,
    /// The (unblinded-row) advice grid after every phase was assigned.
    pub advice_values: Vec<Vec<G::Scalar>>,
    pub challenges: Vec<G::Scalar>,
    pub x: G::Scalar,
}

#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default)]
pub struct ProveOptions {
    /// Skip the divisibility check and commit to a truncated quotient, to
    /// exercise the verifier on unsatisfiable witnesses.
    pub tamper_quotient: bool,
}

/// Preamble shared by prover and verifier: key digest, public instance and
/// any caller-supplied statement commitments.
pub(crate) fn absorb_statement<G: PrimeGroup>(
    transcript: &mut Transcript,
    vk: &VerifyingKey<G>,
    instance: &[Vec<G::Scalar>],
    statement: &[G],
) {
    transcript.absorb_bytes(b"vk-digest", &vk.digest());
    transcript.absorb_bytes(b"instance-columns", &(instance.len() as u64).to_le_bytes());
    for col in instance {
        transcript.absorb_scalars(b"instance", col);
    }
    transcript.absorb_bytes(b"statement-count", &(statement.len() as u64).to_le_bytes());
    transcript.absorb_points(b"statement", statement);
}

/// Position of an oracle in the batch-opening polynomial list:
/// advice, fixed, σ, z chunks, then the folded quotient.
pub(crate) fn oracle_slot<F: PrimeField>(cs: &crate::plonkish::ConstraintSystem<F>, o: Oracle) -> usize {
    let na = cs.num_advice();
    let nf = cs.num_fixed;
    let ns = cs.permutation_columns.len();
    let nz = cs.num_permutation_chunks();
    match o {
        Oracle::Column(c) => match c.kind {
            ColumnKind::Advice => c.index,
            ColumnKind::Fixed => na + c.index,
            ColumnKind::Instance => unreachable!("instance columns are not committed"),
        },
        Oracle::Sigma(i) => na + nf + i,
        Oracle::Z(c) => na + nf + ns + c,
        Oracle::Quotient => na + nf + ns + nz,
    }
}

pub(crate) fn query_point<F: PrimeField>(
    domain: &crate::algebra::EvaluationDomain<F>,
    usable: usize,
    x: F,
    p: QueryPoint,
) -> F {
    match p {
        QueryPoint::Rot(r) => domain.rotate(x, r),
        QueryPoint::LastRow => x * domain.omega().pow_u64(usable as u64),
    }
}

pub fn prove<G: PrimeGroup, W: Witness<G::Scalar>, R: RngCore + ?Sized>(
    ck: &CommitKey<G>,
    pk: &ProvingKey<G>,
    instance: &[Vec<G::Scalar>],
    witness: &mut W,
    statement: &[G],
    transcript: &mut Transcript,
    rng: &mut R,
) -> Result<ProverOutput<G>> {
    prove_with(ck, pk, instance, witness, statement, transcript, rng, ProveOptions::default())
}

#[doc(hidden)]
#[allow(clippy::too_many_arguments)]
pub fn prove_with<G: PrimeGroup, W: Witness<G::Scalar>, R: RngCore + ?Sized>(
    ck: &CommitKey<G>,
    pk: &ProvingKey<G>,
    instance: &[Vec<G::Scalar>],
    witness: &mut W,
    statement: &[G],
    transcript: &mut Transcript,
    rng: &mut R,
    options: ProveOptions,
) -> Result<ProverOutput<G>> {
    let index = &pk.index;
    let cs = index.cs();
    let n = index.n();
    let usable = index.usable_rows();
    let domain = &pk.domain;
    let bound = n - 1;

    let instance = pad_instance(index, instance)?;
    absorb_statement(transcript, &pk.vk, &instance, statement);

    // Advice rounds.
    let num_advice = cs.num_advice();
    let mut advice = vec![vec![G::Scalar::ZERO; n]; num_advice];
    let mut advice_polys = vec![Polynomial::<G::Scalar, Coeff>::zero(); num_advice];
    let mut advice_blinds = vec![G::Scalar::ZERO; num_advice];
    let mut challenges = vec![G::Scalar::ZERO; cs.challenge_phases.len()];
    let mut advice_commitments = Vec::with_capacity(cs.num_phases() as usize);
    for phase in 0..cs.num_phases() {
        witness.assign_phase(phase, &challenges, &mut advice)?;
        let mut round = Vec::new();
        for col in cs.advice_in_phase(phase) {
            if advice[col].len() != n {
                return Err(Error::ShapeMismatch(format!("advice column {col} has {} rows", advice[col].len())));
            }
            let blinded = blind_lagrange(&advice[col], usable, n - usable, rng)?;
            let poly = domain.interpolate(&domain.lagrange_from_vec(blinded)?)?;
            let blind = G::Scalar::random(&mut *rng);
            let c = ck.commit(&poly, bound, blind)?;
            transcript.absorb_phase_commitment(phase, b"advice", &c.point)?;
            round.push(c.point);
            advice_polys[col] = poly;
            advice_blinds[col] = blind;
        }
        transcript.close_phase(phase)?;
        advice_commitments.push(round);
        for i in cs.challenges_after(phase) {
            challenges[i] = transcript.challenge(b"phase-challenge");
        }
    }

    // Permutation grand products.
    let beta: G::Scalar = transcript.challenge(b"perm-beta");
    let gamma: G::Scalar = transcript.challenge(b"perm-gamma");
    let column_values = |c: Column| -> &[G::Scalar] {
        match c.kind {
            ColumnKind::Advice => &advice[c.index],
            ColumnKind::Fixed => &index.fixed()[c.index],
            ColumnKind::Instance => &instance[c.index],
        }
    };
    let sigma_values = permutation::sigma_lagrange(index);
    let ids = permutation::identity_labels(index);
    let chunk_len = cs.permutation_chunk_len();
    let chunks = cs.num_permutation_chunks();
    let mut z_polys = Vec::with_capacity(chunks);
    let mut z_blinds = Vec::with_capacity(chunks);
    let mut z_commitments = Vec::with_capacity(chunks);
    let mut carry = G::Scalar::ONE;
    for c in 0..chunks {
        let cols = c * chunk_len..((c + 1) * chunk_len).min(cs.permutation_columns.len());
        let mut num = vec![G::Scalar::ONE; usable];
        let mut den = vec![G::Scalar::ONE; usable];
        for i in cols {
            let v = column_values(cs.permutation_columns[i]);
            for j in 0..usable {
                num[j] *= v[j] + beta * ids[i][j] + gamma;
                den[j] *= v[j] + beta * sigma_values[i][j] + gamma;
            }
        }
        batch_invert(&mut den);
        let mut z = Vec::with_capacity(n);
        z.push(carry);
        for j in 0..usable {
            let next = z[j] * num[j] * den[j];
            z.push(next);
        }
        carry = z[usable];
        while z.len() < n {
            z.push(G::Scalar::random(&mut *rng));
        }
        let poly = domain.interpolate(&domain.lagrange_from_vec(z)?)?;
        let blind = G::Scalar::random(&mut *rng);
        let commitment = ck.commit(&poly, bound, blind)?;
        transcript.absorb_point(b"perm-z", &commitment.point);
        z_polys.push(poly);
        z_blinds.push(blind);
        z_commitments.push(commitment.point);
    }

    // Quotient.
    let y: G::Scalar = transcript.challenge(b"aggregate-y");
    let instance_polys = instance
        .iter()
        .map(|col| domain.interpolate(&domain.lagrange_from_vec(col.clone())?))
        .collect::<Result<Vec<_>>>()?;
    let advice_cosets: Vec<_> = advice_polys.iter().map(|p| pk.to_coset(p)).collect();
    let instance_cosets: Vec<_> = instance_polys.iter().map(|p| pk.to_coset(p)).collect();
    let z_cosets: Vec<_> = z_polys.iter().map(|p| pk.to_coset(p)).collect();

    let ext_n = pk.ext_domain.size();
    let factor = pk.ext_factor();
    let deltas = permutation::delta_powers::<G::Scalar>(cs.permutation_columns.len());
    let mut g = Vec::with_capacity(ext_n);
    let mut xi = pk.coset_shift;
    let ext_omega = pk.ext_domain.omega();
    for i in 0..ext_n {
        let at = |coset: &Polynomial<G::Scalar, ExtendedLagrangeCoeff>, p: QueryPoint| {
            let shift = match p {
                QueryPoint::Rot(r) => r as i64 * factor as i64,
                QueryPoint::LastRow => (usable * factor) as i64,
            };
            coset.values()[(i as i64 + shift).rem_euclid(ext_n as i64) as usize]
        };
        let value = |o: Oracle, p: QueryPoint| match o {
            Oracle::Column(c) => match c.kind {
                ColumnKind::Advice => at(&advice_cosets[c.index], p),
                ColumnKind::Fixed => at(&pk.fixed_cosets[c.index], p),
                ColumnKind::Instance => at(&instance_cosets[c.index], p),
            },
            Oracle::Sigma(s) => at(&pk.sigma_cosets[s], p),
            Oracle::Z(c) => at(&z_cosets[c], p),
            Oracle::Quotient => unreachable!("the quotient is not part of the aggregate"),
        };
        let inputs = AggregateInputs {
            challenges: &challenges,
            beta,
            gamma,
            y,
            x: xi,
            l0: pk.l0.values()[i],
            l_last: pk.l_last.values()[i],
            l_active: pk.l_active.values()[i],
            deltas: &deltas,
        };
        g.push(aggregate(cs, &inputs, &value));
        xi *= ext_omega;
    }
    // Z_H on the coset only takes `factor` distinct values.
    let shift_n = pk.coset_shift.pow_u64(n as u64);
    let mut zh: Vec<G::Scalar> = (0..factor)
        .map(|j| shift_n * ext_omega.pow_u64((j * n) as u64) - G::Scalar::ONE)
        .collect();
    batch_invert(&mut zh);
    for (i, v) in g.iter_mut().enumerate() {
        *v *= zh[i % factor];
    }
    let t = pk.ext_domain.coset_intt(Polynomial::from_vec(g), pk.coset_shift)?;
    let num_chunks = cs.num_quotient_chunks();
    let mut t_chunks = Vec::with_capacity(num_chunks);
    let mut t_blinds = Vec::with_capacity(num_chunks);
    let mut quotient_commitments = Vec::with_capacity(num_chunks);
    for c in 0..num_chunks {
        let lo = (c * n).min(t.len());
        let hi = ((c + 1) * n).min(t.len());
        let chunk = Polynomial::from_vec(t.values()[lo..hi].to_vec());
        let blind = G::Scalar::random(&mut *rng);
        let commitment = ck.commit(&chunk, bound, blind)?;
        transcript.absorb_point(b"quotient", &commitment.point);
        t_chunks.push(chunk);
        t_blinds.push(blind);
        quotient_commitments.push(commitment.point);
    }

    // Evaluations.
    let x: G::Scalar = transcript.challenge(b"eval-x");
    let layout = query_layout(cs);
    let poly_of = |o: Oracle| -> &Polynomial<G::Scalar, Coeff> {
        match o {
            Oracle::Column(c) => match c.kind {
                ColumnKind::Advice => &advice_polys[c.index],
                ColumnKind::Fixed => &pk.fixed_polys[c.index],
                ColumnKind::Instance => unreachable!("instance columns are not opened"),
            },
            Oracle::Sigma(s) => &pk.sigma_polys[s],
            Oracle::Z(c) => &z_polys[c],
            Oracle::Quotient => unreachable!("handled separately"),
        }
    };
    let mut evals = Vec::with_capacity(layout.len());
    let mut queries = Vec::with_capacity(layout.len() + 1);
    for &(o, p) in &layout {
        let point = query_point(domain, usable, x, p);
        let v = poly_of(o).evaluate(point);
        transcript.absorb_scalar(b"eval", &v);
        evals.push((o, p, v));
        queries.push(Query {
            poly: oracle_slot(cs, o),
            point,
            value: v,
        });
    }

    // The extended domain only just fits the quotient, so a witness that
    // misses a constraint is caught here, where the verifier would catch it.
    if !options.tamper_quotient {
        let value = |o: Oracle, p: QueryPoint| match o {
            Oracle::Column(c) if c.kind == ColumnKind::Instance => {
                domain.evaluate_lagrange(&instance[c.index], query_point(domain, usable, x, p))
            }
            _ => evals.iter().find(|e| e.0 == o && e.1 == p).expect("queried oracle").2,
        };
        let ch = AggregateChallenges {
            challenges: &challenges,
            beta,
            gamma,
            y,
        };
        if quotient_at(cs, domain, usable, &ch, x, value) != Some(t.evaluate(x)) {
            return Err(Error::UnsatisfiedConstraint);
        }
    }

    // Folded quotient Σ x^{cn}·t_c.
    let xn = x.pow_u64(n as u64);
    let mut quotient = Polynomial::<G::Scalar, Coeff>::zero();
    let mut quotient_blind = G::Scalar::ZERO;
    let mut quotient_point = G::identity();
    let mut power = G::Scalar::ONE;
    for ((chunk, blind), point) in t_chunks.iter().zip(&t_blinds).zip(&quotient_commitments) {
        quotient = quotient.add_scaled(chunk, power);
        quotient_blind += *blind * power;
        quotient_point += *point * power;
        power *= xn;
    }
    queries.push(Query {
        poly: oracle_slot(cs, Oracle::Quotient),
        point: x,
        value: quotient.evaluate(x),
    });

    let xi: G::Scalar = transcript.challenge(b"batch-xi");
    let mut entries: Vec<(&Polynomial<G::Scalar, Coeff>, G::Scalar, G)> = Vec::new();
    for col in 0..num_advice {
        let round = &advice_commitments[cs.advice_phases[col] as usize];
        let pos = cs.advice_in_phase(cs.advice_phases[col]).iter().position(|&a| a == col).expect("column in its phase");
        entries.push((&advice_polys[col], advice_blinds[col], round[pos]));
    }
    for (p, c) in pk.fixed_polys.iter().zip(pk.vk.fixed_commitments()) {
        entries.push((p, G::Scalar::ZERO, *c));
    }
    for (p, c) in pk.sigma_polys.iter().zip(pk.vk.sigma_commitments()) {
        entries.push((p, G::Scalar::ZERO, *c));
    }
    for ((p, b), c) in z_polys.iter().zip(&z_blinds).zip(&z_commitments) {
        entries.push((p, *b, *c));
    }
    entries.push((&quotient, quotient_blind, quotient_point));
    let polys: Vec<_> = entries.iter().map(|e| e.0).collect();
    let blinds: Vec<_> = entries.iter().map(|e| e.1).collect();
    let commitments: Vec<_> = entries.iter().map(|e| PolyCommitment::new(e.2, bound)).collect();
    let opening = batch_open(ck, transcript, &polys, &blinds, &commitments, &queries, xi, rng)?;

    Ok(ProverOutput {
        proof: PlonkProof {
            advice_commitments,
            z_commitments,
            quotient_commitments,
            evals,
            opening,
        },
        advice_polys,
        advice_blinds,
        advice_values: advice,
        challenges,
        x,
    })
}
