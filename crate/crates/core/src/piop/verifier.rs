use crate::algebra::PrimeField;
use crate::commit::{batch_check, CommitKey, PolyCommitment, PrimeGroup, Query};
use crate::error::{Error, Result};
use crate::plonkish::{pad_instance_shape, permutation, ColumnKind};

use super::constraint::{aggregate, query_layout, AggregateInputs, Oracle, QueryPoint};
use super::keys::VerifyingKey;
use super::proof::PlonkProof;
use super::prover::{absorb_statement, oracle_slot, query_point};
use super::Transcript;

/// Values re-derived while checking a proof, for callers that append
/// further checks to the same transcript.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verified<F> {
    pub challenges: Vec<F>,
    pub x: F,
}

fn reject<T>(why: &str) -> Result<T> {
    Err(Error::VerificationFailed(why.into()))
}

/// Checks `proof` and returns the challenges it was produced under.
pub fn verify_detailed<G: PrimeGroup>(
    ck: &CommitKey<G>,
    vk: &VerifyingKey<G>,
    instance: &[Vec<G::Scalar>],
    statement: &[G],
    proof: &PlonkProof<G>,
    transcript: &mut Transcript,
) -> Result<Verified<G::Scalar>> {
    let cs = vk.cs();
    let n = vk.n();
    let usable = vk.usable_rows();
    let bound = n - 1;
    let domain = crate::algebra::EvaluationDomain::<G::Scalar>::new(vk.k())?;

    let instance = pad_instance_shape(cs, n, usable, instance)?;
    absorb_statement(transcript, vk, &instance, statement);

    // Shape.
    let phases = cs.num_phases();
    if proof.advice_commitments.len() != phases as usize
        || (0..phases).any(|p| proof.advice_commitments[p as usize].len() != cs.advice_in_phase(p).len())
    {
        return reject("advice round structure");
    }
    if proof.z_commitments.len() != cs.num_permutation_chunks()
        || proof.quotient_commitments.len() != cs.num_quotient_chunks()
    {
        return reject("commitment counts");
    }
    let layout = query_layout(cs);
    if proof.evals.len() != layout.len()
        || proof.evals.iter().zip(&layout).any(|((o, p, _), (lo, lp))| o != lo || p != lp)
    {
        return reject("evaluation layout");
    }

    let mut challenges = vec![G::Scalar::ZERO; cs.challenge_phases.len()];
    for phase in 0..phases {
        for c in &proof.advice_commitments[phase as usize] {
            transcript.absorb_phase_commitment(phase, b"advice", c)?;
        }
        transcript.close_phase(phase)?;
        for i in cs.challenges_after(phase) {
            challenges[i] = transcript.challenge(b"phase-challenge");
        }
    }
    let beta: G::Scalar = transcript.challenge(b"perm-beta");
    let gamma: G::Scalar = transcript.challenge(b"perm-gamma");
    transcript.absorb_points(b"perm-z", &proof.z_commitments);
    let y: G::Scalar = transcript.challenge(b"aggregate-y");
    transcript.absorb_points(b"quotient", &proof.quotient_commitments);
    let x: G::Scalar = transcript.challenge(b"eval-x");
    for (.., v) in &proof.evals {
        transcript.absorb_scalar(b"eval", v);
    }

    // Decision predicate: aggregate(x) = Z_H(x)·t(x).
    let value = |o: Oracle, p: QueryPoint| match o {
        Oracle::Column(c) if c.kind == ColumnKind::Instance => {
            domain.evaluate_lagrange(&instance[c.index], query_point(&domain, usable, x, p))
        }
        _ => proof.eval(o, p).expect("layout covers every queried oracle"),
    };
    let challenges_at = AggregateChallenges {
        challenges: &challenges,
        beta,
        gamma,
        y,
    };
    let Some(quotient_eval) = quotient_at(cs, &domain, usable, &challenges_at, x, value) else {
        return reject("evaluation point in the domain");
    };

    // Batch opening, including the folded quotient at its derived value.
    let xi: G::Scalar = transcript.challenge(b"batch-xi");
    let mut points = Vec::new();
    let mut advice_points = vec![G::identity(); cs.num_advice()];
    for phase in 0..phases {
        for (pos, col) in cs.advice_in_phase(phase).into_iter().enumerate() {
            advice_points[col] = proof.advice_commitments[phase as usize][pos];
        }
    }
    points.extend(advice_points);
    points.extend_from_slice(vk.fixed_commitments());
    points.extend_from_slice(vk.sigma_commitments());
    points.extend_from_slice(&proof.z_commitments);
    let xn = x.pow_u64(n as u64);
    let mut folded = G::identity();
    let mut power = G::Scalar::ONE;
    for t in &proof.quotient_commitments {
        folded += *t * power;
        power *= xn;
    }
    points.push(folded);
    let commitments: Vec<_> = points.into_iter().map(|p| PolyCommitment::new(p, bound)).collect();

    let mut queries: Vec<Query<G::Scalar>> = proof
        .evals
        .iter()
        .map(|&(o, p, v)| Query {
            poly: oracle_slot(cs, o),
            point: query_point(&domain, usable, x, p),
            value: v,
        })
        .collect();
    queries.push(Query {
        poly: oracle_slot(cs, Oracle::Quotient),
        point: x,
        value: quotient_eval,
    });
    if !batch_check(ck, transcript, &commitments, &queries, &proof.opening, xi) {
        return reject("batch opening");
    }
    Ok(Verified { challenges, x })
}

pub fn verify<G: PrimeGroup>(
    ck: &CommitKey<G>,
    vk: &VerifyingKey<G>,
    instance: &[Vec<G::Scalar>],
    statement: &[G],
    proof: &PlonkProof<G>,
    transcript: &mut Transcript,
) -> bool {
    verify_detailed(ck, vk, instance, statement, proof, transcript).is_ok()
}

pub(crate) struct AggregateChallenges<'a, F> {
    pub challenges: &'a [F],
    pub beta: F,
    pub gamma: F,
    pub y: F,
}

/// `aggregate(x) / Z_H(x)` from opened values, or `None` when `x` lies in
/// the domain.
pub(crate) fn quotient_at<F: PrimeField>(
    cs: &crate::plonkish::ConstraintSystem<F>,
    domain: &crate::algebra::EvaluationDomain<F>,
    usable: usize,
    ch: &AggregateChallenges<'_, F>,
    x: F,
    value: impl Fn(Oracle, QueryPoint) -> F,
) -> Option<F> {
    let zh_inv = domain.vanishing_eval(x).inverse()?;
    let mut lagrange = domain.lagrange_evals([0, usable], x);
    let l_last = lagrange.pop().expect("two rows");
    let l0 = lagrange.pop().expect("two rows");
    let l_blind: F = domain.lagrange_evals(usable..domain.size(), x).into_iter().sum();
    let deltas = permutation::delta_powers::<F>(cs.permutation_columns.len());
    let inputs = AggregateInputs {
        challenges: ch.challenges,
        beta: ch.beta,
        gamma: ch.gamma,
        y: ch.y,
        x,
        l0,
        l_last,
        l_active: F::ONE - l_blind,
        deltas: &deltas,
    };
    Some(aggregate(cs, &inputs, &value) * zh_inv)
}
