//! Batch opening of many (polynomial, point) claims with one inner-product
//! argument.
//!
//! Claims are grouped by point. Within a group the polynomials are folded
//! with powers of the opening challenge `ξ`; the groups are then reduced to
//! one polynomial `h = Σ ζ^j (p_j − v_j)/(X − x_j)` which is committed, and
//! everything is finally opened at a single fresh point.

use rand::RngCore;

use crate::algebra::{Coeff, Polynomial, PrimeField};
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::piop::Transcript;

use super::group::PrimeGroup;
use super::ipa::{self, OpeningProof};
use super::pedersen::{CommitKey, PolyCommitment};

/// One claim `polys[poly] (point) = value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Query<F> {
    pub poly: usize,
    pub point: F,
    pub value: F,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchProof<G: PrimeGroup> {
    pub h_commitment: G,
    pub group_evals: Vec<G::Scalar>,
    pub ipa: OpeningProof<G>,
}

impl<G: PrimeGroup> BatchProof<G> {
    pub fn write(&self, w: &mut Writer) {
        w.put_point(&self.h_commitment);
        w.put_scalars(&self.group_evals);
        self.ipa.write(w);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        Ok(BatchProof {
            h_commitment: r.get_point()?,
            group_evals: r.get_scalars()?,
            ipa: OpeningProof::read(r)?,
        })
    }
}

/// Queries grouped by point, in order of first appearance.
struct PointGroup<F> {
    point: F,
    members: Vec<Query<F>>,
}

fn group_by_point<F: PrimeField>(queries: &[Query<F>]) -> Vec<PointGroup<F>> {
    let mut groups: Vec<PointGroup<F>> = Vec::new();
    for q in queries {
        match groups.iter_mut().find(|g| g.point == q.point) {
            Some(g) => g.members.push(*q),
            None => groups.push(PointGroup {
                point: q.point,
                members: vec![*q],
            }),
        }
    }
    groups
}

fn absorb_queries<F: PrimeField>(transcript: &mut Transcript, queries: &[Query<F>]) {
    transcript.absorb_bytes(b"batch-count", &(queries.len() as u64).to_le_bytes());
    for q in queries {
        transcript.absorb_bytes(b"batch-poly", &(q.poly as u64).to_le_bytes());
        transcript.absorb_scalar(b"batch-point", &q.point);
        transcript.absorb_scalar(b"batch-value", &q.value);
    }
}

/// Prover side. `polys`, `blinds` and `commitments` are indexed by
/// [`Query::poly`].
#[allow(clippy::too_many_arguments)]
pub fn batch_open<G: PrimeGroup, R: RngCore + ?Sized>(
    ck: &CommitKey<G>,
    transcript: &mut Transcript,
    polys: &[&Polynomial<G::Scalar, Coeff>],
    blinds: &[G::Scalar],
    commitments: &[PolyCommitment<G>],
    queries: &[Query<G::Scalar>],
    xi: G::Scalar,
    rng: &mut R,
) -> Result<BatchProof<G>> {
    if polys.len() != blinds.len() || polys.len() != commitments.len() {
        return Err(Error::ShapeMismatch(
            "batch opening inputs differ in length".into(),
        ));
    }
    for q in queries {
        let poly = polys.get(q.poly).ok_or(Error::ClaimedValueWrong)?;
        if poly.evaluate(q.point) != q.value {
            return Err(Error::ClaimedValueWrong);
        }
    }
    absorb_queries(transcript, queries);
    let groups = group_by_point(queries);
    let bound = commitments.iter().map(|c| c.degree_bound).max().unwrap_or(0);

    // p_j = Σ ξ^t g_t within each group.
    let mut folded = Vec::with_capacity(groups.len());
    for g in &groups {
        let mut p = Polynomial::<G::Scalar, Coeff>::zero();
        let mut blind = G::Scalar::ZERO;
        let mut value = G::Scalar::ZERO;
        let mut commitment = G::identity();
        let mut power = G::Scalar::ONE;
        for q in &g.members {
            p = p.add_scaled(polys[q.poly], power);
            blind += blinds[q.poly] * power;
            value += q.value * power;
            commitment += commitments[q.poly].point * power;
            power *= xi;
        }
        folded.push((p, blind, value, commitment));
    }

    let zeta: G::Scalar = transcript.challenge(b"batch-zeta");
    let mut h = Polynomial::<G::Scalar, Coeff>::zero();
    let mut zeta_pow = G::Scalar::ONE;
    for (g, (p, _, v, _)) in groups.iter().zip(&folded) {
        let shifted = p.add_scaled(&Polynomial::constant(*v), -G::Scalar::ONE);
        let (q, rem) = shifted.divide_linear(g.point);
        debug_assert!(rem.is_zero());
        h = h.add_scaled(&q, zeta_pow);
        zeta_pow *= zeta;
    }
    let h_blind = G::Scalar::random(rng);
    let h_commitment = ck.commit(&h, bound, h_blind)?;
    transcript.absorb_point(b"batch-h", &h_commitment.point);

    let x3: G::Scalar = transcript.challenge(b"batch-x3");
    let group_evals: Vec<G::Scalar> = folded.iter().map(|(p, ..)| p.evaluate(x3)).collect();
    transcript.absorb_scalars(b"batch-u", &group_evals);
    let x4: G::Scalar = transcript.challenge(b"batch-x4");

    let mut f = h;
    let mut f_blind = h_blind;
    let mut f_point = h_commitment.point;
    let mut x4_pow = x4;
    for (p, blind, _, commitment) in &folded {
        f = f.add_scaled(p, x4_pow);
        f_blind += *blind * x4_pow;
        f_point += *commitment * x4_pow;
        x4_pow *= x4;
    }
    let f_commitment = PolyCommitment::new(f_point, bound);
    let y = f.evaluate(x3);
    let ipa = ipa::open(ck, transcript, &f_commitment, &f, x3, y, f_blind, rng)?;
    Ok(BatchProof {
        h_commitment: h_commitment.point,
        group_evals,
        ipa,
    })
}

/// Verifier side of [`batch_open`].
pub fn batch_check<G: PrimeGroup>(
    ck: &CommitKey<G>,
    transcript: &mut Transcript,
    commitments: &[PolyCommitment<G>],
    queries: &[Query<G::Scalar>],
    proof: &BatchProof<G>,
    xi: G::Scalar,
) -> bool {
    if queries.iter().any(|q| q.poly >= commitments.len()) {
        return false;
    }
    absorb_queries(transcript, queries);
    let groups = group_by_point(queries);
    if proof.group_evals.len() != groups.len() {
        return false;
    }
    let bound = commitments.iter().map(|c| c.degree_bound).max().unwrap_or(0);

    let mut folded = Vec::with_capacity(groups.len());
    for g in &groups {
        let mut value = G::Scalar::ZERO;
        let mut bases = Vec::with_capacity(g.members.len());
        let mut scalars = Vec::with_capacity(g.members.len());
        let mut power = G::Scalar::ONE;
        for q in &g.members {
            value += q.value * power;
            bases.push(commitments[q.poly].point);
            scalars.push(power);
            power *= xi;
        }
        folded.push((value, G::msm(&bases, &scalars)));
    }

    let zeta: G::Scalar = transcript.challenge(b"batch-zeta");
    transcript.absorb_point(b"batch-h", &proof.h_commitment);
    let x3: G::Scalar = transcript.challenge(b"batch-x3");
    transcript.absorb_scalars(b"batch-u", &proof.group_evals);
    let x4: G::Scalar = transcript.challenge(b"batch-x4");

    // h(x3) from the claimed group evaluations.
    let mut h_eval = G::Scalar::ZERO;
    let mut zeta_pow = G::Scalar::ONE;
    for (g, ((v, _), u)) in groups.iter().zip(folded.iter().zip(&proof.group_evals)) {
        let denom = match (x3 - g.point).inverse() {
            Some(d) => d,
            None => return false,
        };
        h_eval += zeta_pow * (*u - *v) * denom;
        zeta_pow *= zeta;
    }

    let mut f_point = proof.h_commitment;
    let mut y = h_eval;
    let mut x4_pow = x4;
    for ((_, commitment), u) in folded.iter().zip(&proof.group_evals) {
        f_point += *commitment * x4_pow;
        y += *u * x4_pow;
        x4_pow *= x4;
    }
    let f_commitment = PolyCommitment::new(f_point, bound);
    ipa::check(ck, transcript, &f_commitment, x3, y, &proof.ipa)
}
