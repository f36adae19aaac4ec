//! Hiding inner-product-argument evaluation proofs over the Pedersen basis.
//!
//! The prover first adds a random polynomial `s` with `s(x) = 0` (sent as
//! the commitment `S`), so the folded coefficient revealed at the end is
//! independent of the committed polynomial. Each of the `log N` rounds
//! halves the coefficient, basis and evaluation vectors.

use rand::RngCore;

use crate::algebra::{batch_invert, horner_eval, powers, Coeff, Polynomial, PrimeField};
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};
use crate::piop::Transcript;

use super::group::PrimeGroup;
use super::pedersen::{CommitKey, PolyCommitment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpeningProof<G: PrimeGroup> {
    pub s_commitment: G,
    pub rounds: Vec<(G, G)>,
    pub a: G::Scalar,
    pub blind: G::Scalar,
}

impl<G: PrimeGroup> OpeningProof<G> {
    /// `round count (u8) ‖ S ‖ (L, R)* ‖ a ‖ blind`.
    pub fn write(&self, w: &mut Writer) {
        w.put_u8(self.rounds.len() as u8);
        w.put_point(&self.s_commitment);
        for (l, r) in &self.rounds {
            w.put_point(l);
            w.put_point(r);
        }
        w.put_scalar(&self.a);
        w.put_scalar(&self.blind);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let k = r.get_u8()? as usize;
        if k > 32 {
            return Err(Error::ProofDecode(format!("{k} rounds")));
        }
        let s_commitment = r.get_point()?;
        let mut rounds = Vec::with_capacity(k);
        for _ in 0..k {
            rounds.push((r.get_point()?, r.get_point()?));
        }
        Ok(OpeningProof {
            s_commitment,
            rounds,
            a: r.get_scalar()?,
            blind: r.get_scalar()?,
        })
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

    /// Encoded size for a proof with `rounds` rounds.
    pub fn encoded_len(rounds: usize) -> usize {
        1 + G::ENCODED_LEN * (1 + 2 * rounds) + 2 * G::Scalar::ENCODED_LEN
    }
}

/// Length of the vectors the argument runs over for degree bound `bound`.
fn padded_len<G: PrimeGroup>(ck: &CommitKey<G>, bound: usize) -> Result<usize> {
    let n = (bound + 1).next_power_of_two();
    if n > ck.basis().len() {
        return Err(Error::DegreeBoundExceeded {
            degree: n - 1,
            bound: ck.max_degree(),
        });
    }
    Ok(n)
}

fn absorb_statement<G: PrimeGroup>(
    transcript: &mut Transcript,
    commitment: &PolyCommitment<G>,
    x: G::Scalar,
    y: G::Scalar,
) {
    transcript.absorb_point(b"ipa-commitment", &commitment.point);
    transcript.absorb_bytes(b"ipa-degree-bound", &(commitment.degree_bound as u64).to_le_bytes());
    transcript.absorb_scalar(b"ipa-point", &x);
    transcript.absorb_scalar(b"ipa-value", &y);
}

fn inner<F: PrimeField>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Proves `poly(x) = y` for the commitment `commitment = commit(poly, d, blind)`.
#[allow(clippy::too_many_arguments)]
pub fn open<G: PrimeGroup, R: RngCore + ?Sized>(
    ck: &CommitKey<G>,
    transcript: &mut Transcript,
    commitment: &PolyCommitment<G>,
    poly: &Polynomial<G::Scalar, Coeff>,
    x: G::Scalar,
    y: G::Scalar,
    blind: G::Scalar,
    rng: &mut R,
) -> Result<OpeningProof<G>> {
    let bound = commitment.degree_bound;
    let n = padded_len(ck, bound)?;
    if poly.degree() > bound {
        return Err(Error::DegreeBoundExceeded {
            degree: poly.degree(),
            bound,
        });
    }
    if poly.evaluate(x) != y {
        return Err(Error::ClaimedValueWrong);
    }
    absorb_statement(transcript, commitment, x, y);

    // Random s with s(x) = 0.
    let mut s: Vec<G::Scalar> = (0..n).map(|_| G::Scalar::random(rng)).collect();
    s[0] = G::Scalar::ZERO;
    s[0] = -horner_eval(&s, x);
    let s_blind = G::Scalar::random(rng);
    let s_commitment = G::msm(&ck.basis()[..n], &s) + ck.h() * s_blind;
    transcript.absorb_point(b"ipa-s", &s_commitment);
    let xi: G::Scalar = transcript.challenge(b"ipa-xi");
    let z: G::Scalar = transcript.challenge(b"ipa-z");
    let u = ck.u() * z;

    let mut a = poly.resized(n).into_vec();
    for (ai, si) in a.iter_mut().zip(&s) {
        *ai += xi * *si;
    }
    let mut b = powers(x, n);
    let mut g = ck.basis()[..n].to_vec();
    let mut acc_blind = blind + xi * s_blind;

    let mut rounds = Vec::with_capacity(n.trailing_zeros() as usize);
    let mut half = n / 2;
    while half > 0 {
        let (a_lo, a_hi) = a.split_at(half);
        let (b_lo, b_hi) = b.split_at(half);
        let (g_lo, g_hi) = g.split_at(half);
        let l_blind = G::Scalar::random(rng);
        let r_blind = G::Scalar::random(rng);
        let l = G::msm(g_lo, a_hi) + u * inner(a_hi, b_lo) + ck.h() * l_blind;
        let r = G::msm(g_hi, a_lo) + u * inner(a_lo, b_hi) + ck.h() * r_blind;
        transcript.absorb_point(b"ipa-l", &l);
        transcript.absorb_point(b"ipa-r", &r);
        // Short challenges halve the cost of folding the generators.
        let uj: G::Scalar = transcript.short_challenge(b"ipa-u");
        let uj_inv = uj.inverse().ok_or(Error::InverseOfZero)?;

        let new_a: Vec<_> = (0..half).map(|i| a_lo[i] + a_hi[i] * uj_inv).collect();
        let new_b: Vec<_> = (0..half).map(|i| b_lo[i] + b_hi[i] * uj).collect();
        let new_g: Vec<_> = g_lo.iter().zip(G::scale_all(g_hi, uj)).map(|(lo, hi)| *lo + hi).collect();
        acc_blind += l_blind * uj_inv + r_blind * uj;
        a = new_a;
        b = new_b;
        g = new_g;
        rounds.push((l, r));
        half /= 2;
    }

    Ok(OpeningProof {
        s_commitment,
        rounds,
        a: a[0],
        blind: acc_blind,
    })
}

/// Checks an opening proof for `(commitment, x, y)`.
pub fn check<G: PrimeGroup>(
    ck: &CommitKey<G>,
    transcript: &mut Transcript,
    commitment: &PolyCommitment<G>,
    x: G::Scalar,
    y: G::Scalar,
    proof: &OpeningProof<G>,
) -> bool {
    let n = match padded_len(ck, commitment.degree_bound) {
        Ok(n) => n,
        Err(_) => return false,
    };
    let k = n.trailing_zeros() as usize;
    if proof.rounds.len() != k {
        return false;
    }
    absorb_statement(transcript, commitment, x, y);
    transcript.absorb_point(b"ipa-s", &proof.s_commitment);
    let xi: G::Scalar = transcript.challenge(b"ipa-xi");
    let z: G::Scalar = transcript.challenge(b"ipa-z");
    let u = ck.u() * z;

    let mut challenges = Vec::with_capacity(k);
    for (l, r) in &proof.rounds {
        transcript.absorb_point(b"ipa-l", l);
        transcript.absorb_point(b"ipa-r", r);
        challenges.push(transcript.short_challenge::<G::Scalar>(b"ipa-u"));
    }
    if challenges.iter().any(|c| c.is_zero()) {
        return false;
    }
    let mut inverses = challenges.clone();
    batch_invert(&mut inverses);

    // P = C + ξS + yU + Σ (u_j^{-1} L_j + u_j R_j)
    let mut bases = vec![commitment.point, proof.s_commitment, u];
    let mut scalars = vec![G::Scalar::ONE, xi, y];
    for ((l, r), (uj, uj_inv)) in proof.rounds.iter().zip(challenges.iter().zip(&inverses)) {
        bases.push(*l);
        scalars.push(*uj_inv);
        bases.push(*r);
        scalars.push(*uj);
    }
    let lhs = G::msm(&bases, &scalars);

    // Folding coefficients of each basis generator: round j (first round
    // first) contributes u_j when bit (k-1-j) of the index is set.
    let mut s = vec![G::Scalar::ONE; n];
    for (j, uj) in challenges.iter().enumerate() {
        let bit = 1 << (k - 1 - j);
        for (i, si) in s.iter_mut().enumerate() {
            if i & bit != 0 {
                *si *= *uj;
            }
        }
    }
    let g_final = G::msm(&ck.basis()[..n], &s);

    // b folds the same way, so b_final = Π (1 + u_j x^{2^{k-1-j}}).
    let mut b_final = G::Scalar::ONE;
    let mut x_pow = x;
    for j in (0..k).rev() {
        b_final *= G::Scalar::ONE + challenges[j] * x_pow;
        x_pow = x_pow.square();
    }

    let rhs = g_final * proof.a + u * (proof.a * b_final) + ck.h() * proof.blind;
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F17;
    use crate::commit::SchnorrGroup17;
    use pasta_curves::pallas;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    type G = pallas::Point;
    type Fq = pallas::Scalar;

    fn random_poly<F: PrimeField>(rng: &mut ChaCha20Rng, len: usize) -> Polynomial<F, Coeff> {
        Polynomial::from_vec((0..len).map(|_| F::random(&mut *rng)).collect())
    }

    fn prove_and_check<G2: PrimeGroup>(
        ck: &CommitKey<G2>,
        poly: &Polynomial<G2::Scalar, Coeff>,
        bound: usize,
        x: G2::Scalar,
        rng: &mut ChaCha20Rng,
    ) -> bool {
        let r = G2::Scalar::random(&mut *rng);
        let c = ck.commit(poly, bound, r).unwrap();
        let y = poly.evaluate(x);
        let proof = open(ck, &mut Transcript::new(b"t"), &c, poly, x, y, r, rng).unwrap();
        check(ck, &mut Transcript::new(b"t"), &c, x, y, &proof)
    }

    #[test]
    fn constant_polynomial_opens() {
        let ck = CommitKey::<G>::setup(b"ipa", 7).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let c = Polynomial::constant(Fq::from_u64(5));
        assert!(prove_and_check(&ck, &c, 0, Fq::random(&mut rng), &mut rng));
        assert!(prove_and_check(&ck, &c, 7, Fq::random(&mut rng), &mut rng));
    }

    #[test]
    fn random_openings_verify() {
        let ck = CommitKey::<G>::setup(b"ipa", 15).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for trial in 0..100 {
            let bound = trial % 16;
            let poly = random_poly(&mut rng, bound + 1);
            let x = Fq::random(&mut rng);
            assert!(prove_and_check(&ck, &poly, bound, x, &mut rng));
        }
    }

    #[test]
    fn toy_group_openings_verify() {
        let ck = CommitKey::<SchnorrGroup17>::setup(b"toy", 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let mut verified = 0;
        for _ in 0..50 {
            let poly: Polynomial<F17, Coeff> = random_poly(&mut rng, 4);
            let x = F17::random(&mut rng);
            let r = F17::random(&mut rng);
            let c = ck.commit(&poly, 3, r).unwrap();
            let y = poly.evaluate(x);
            // A round challenge of zero (probability 1/17 here) aborts.
            match open(&ck, &mut Transcript::new(b"t"), &c, &poly, x, y, r, &mut rng) {
                Ok(proof) => {
                    assert!(check(&ck, &mut Transcript::new(b"t"), &c, x, y, &proof));
                    verified += 1;
                }
                Err(e) => assert_eq!(e, Error::InverseOfZero),
            }
        }
        assert!(verified >= 30);
    }

    #[test]
    fn wrong_value_refused_and_rejected() {
        let ck = CommitKey::<G>::setup(b"ipa", 7).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let poly = random_poly(&mut rng, 8);
        let x = Fq::random(&mut rng);
        let y = poly.evaluate(x);
        let r = Fq::random(&mut rng);
        let c = ck.commit(&poly, 7, r).unwrap();
        assert_eq!(
            open(&ck, &mut Transcript::new(b"t"), &c, &poly, x, y + Fq::ONE, r, &mut rng),
            Err(Error::ClaimedValueWrong)
        );
        let proof = open(&ck, &mut Transcript::new(b"t"), &c, &poly, x, y, r, &mut rng).unwrap();
        assert!(!check(&ck, &mut Transcript::new(b"t"), &c, x, y + Fq::ONE, &proof));
        assert!(!check(&ck, &mut Transcript::new(b"t"), &c, x + Fq::ONE, y, &proof));
        let other = ck.commit(&poly, 7, r + Fq::ONE).unwrap();
        assert!(!check(&ck, &mut Transcript::new(b"t"), &other, x, y, &proof));
        assert!(!check(&ck, &mut Transcript::new(b"u"), &c, x, y, &proof));
    }

    #[test]
    fn proof_bytes_round_trip_and_size() {
        let ck = CommitKey::<G>::setup(b"ipa", 15).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let poly = random_poly(&mut rng, 16);
        let x = Fq::random(&mut rng);
        let c = ck.commit(&poly, 15, Fq::ONE).unwrap();
        let proof = open(&ck, &mut Transcript::new(b"t"), &c, &poly, x, poly.evaluate(x), Fq::ONE, &mut rng).unwrap();
        let bytes = proof.to_bytes();
        assert_eq!(bytes.len(), OpeningProof::<G>::encoded_len(4));
        assert_eq!(OpeningProof::<G>::from_bytes(&bytes).unwrap(), proof);
        assert!(OpeningProof::<G>::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }
}
