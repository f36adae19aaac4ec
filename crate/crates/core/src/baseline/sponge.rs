use sha2::{Digest, Sha512};

use crate::algebra::PrimeField;

pub const WIDTH: usize = 3;
pub const RATE: usize = 2;
/// Full rounds, split evenly before and after the partial rounds.
pub const FULL_ROUNDS: usize = 8;
pub const PARTIAL_ROUNDS: usize = 14;

/// Round constants and MDS matrix for the `x ↦ x⁵` sponge. Not production
/// parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpongeParams<F> {
    pub round_constants: Vec<[F; WIDTH]>,
    pub mds: [[F; WIDTH]; WIDTH],
}

impl<F: PrimeField> SpongeParams<F> {
    /// Derives the round constants from `seed`; the MDS matrix is the
    /// Cauchy matrix `1 / (i + WIDTH + j)`.
    pub fn new(seed: &[u8]) -> Self {
        let rounds = FULL_ROUNDS + PARTIAL_ROUNDS;
        let round_constants = (0..rounds)
            .map(|r| {
                std::array::from_fn(|j| {
                    let mut h = Sha512::new();
                    h.update(b"sponge-rc");
                    h.update(seed);
                    h.update((r as u32).to_le_bytes());
                    h.update((j as u32).to_le_bytes());
                    F::from_uniform_bytes(&h.finalize().into())
                })
            })
            .collect();
        let mds = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                F::from_u64((i + WIDTH + j) as u64)
                    .inverse()
                    .expect("field larger than 2·WIDTH")
            })
        });
        SpongeParams { round_constants, mds }
    }

    pub fn rounds(&self) -> usize {
        self.round_constants.len()
    }

    /// Whether round `r` applies the S-box to the whole state.
    pub fn is_full_round(r: usize) -> bool {
        !(FULL_ROUNDS / 2..FULL_ROUNDS / 2 + PARTIAL_ROUNDS).contains(&r)
    }

    /// One round: add constants, S-box, mix.
    pub fn round(&self, r: usize, state: &[F; WIDTH]) -> [F; WIDTH] {
        let mut s: [F; WIDTH] = std::array::from_fn(|j| state[j] + self.round_constants[r][j]);
        for (j, v) in s.iter_mut().enumerate() {
            if j == 0 || Self::is_full_round(r) {
                *v = sbox(*v);
            }
        }
        std::array::from_fn(|i| (0..WIDTH).map(|j| self.mds[i][j] * s[j]).sum())
    }

    /// The state before every round and after the last one.
    pub fn trace(&self, state: [F; WIDTH]) -> Vec<[F; WIDTH]> {
        let mut out = Vec::with_capacity(self.rounds() + 1);
        out.push(state);
        for r in 0..self.rounds() {
            let next = self.round(r, out.last().expect("non-empty"));
            out.push(next);
        }
        out
    }

    pub fn permute(&self, state: [F; WIDTH]) -> [F; WIDTH] {
        *self.trace(state).last().expect("non-empty")
    }
}

pub(crate) fn sbox<F: PrimeField>(x: F) -> F {
    x.square().square() * x
}

/// Appends `1` and then zeros up to a multiple of the rate, so inputs of
/// different lengths never collide through padding.
pub(crate) fn pad<F: PrimeField>(inputs: &[F]) -> Vec<F> {
    let mut out = inputs.to_vec();
    out.push(F::ONE);
    while !out.len().is_multiple_of(RATE) {
        out.push(F::ZERO);
    }
    out
}

/// Absorbs `inputs` rate-wise into a zero state and squeezes one element.
pub fn sponge_hash<F: PrimeField>(params: &SpongeParams<F>, inputs: &[F]) -> F {
    let mut state = [F::ZERO; WIDTH];
    for chunk in pad(inputs).chunks(RATE) {
        for (s, v) in state.iter_mut().zip(chunk) {
            *s += *v;
        }
        state = params.permute(state);
    }
    state[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F17;
    use crate::Scalar;

    #[test]
    fn mds_is_invertible() {
        let m = SpongeParams::<Scalar>::new(b"t").mds;
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        assert!(!det.is_zero());
    }

    #[test]
    fn sbox_permutes_small_field() {
        let mut seen: Vec<u8> = F17::elements().map(|v| sbox(v).value()).collect();
        seen.sort();
        assert_eq!(seen, (0..17).collect::<Vec<_>>());
    }

    #[test]
    fn padding_separates_lengths() {
        let p = SpongeParams::<Scalar>::new(b"t");
        let a = Scalar::from_u64(9);
        assert_ne!(sponge_hash(&p, &[a]), sponge_hash(&p, &[a, Scalar::ZERO]));
        assert_eq!(sponge_hash(&p, &[]), sponge_hash(&p, &[]));
        assert_ne!(sponge_hash(&p, &[]), sponge_hash(&SpongeParams::new(b"u"), &[]));
    }
}
