use std::ops::{Add, Mul, Sub};

use crate::algebra::{Coeff, Polynomial};
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};

use super::group::PrimeGroup;

const KEY_DOMAIN: &str = "artemis-commit-key";

/// Transparent Pedersen commitment key: `max_degree + 1` basis generators
/// plus a blinding generator `h` and the generator `u` used by the
/// inner-product argument, all obtained by hashing a public seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitKey<G: PrimeGroup> {
    seed: Vec<u8>,
    basis: Vec<G>,
    h: G,
    u: G,
}

impl<G: PrimeGroup> CommitKey<G> {
    /// Derives a key from `seed`; nothing but the seed is retained.
    pub fn setup(seed: &[u8], max_degree: usize) -> Result<Self> {
        if max_degree == 0 {
            return Err(Error::DegreeBoundExceeded {
                degree: 0,
                bound: 0,
            });
        }
        let derive = |tag: &[u8], index: u64| {
            let mut msg = Vec::with_capacity(seed.len() + tag.len() + 8);
            msg.extend_from_slice(seed);
            msg.extend_from_slice(tag);
            msg.extend_from_slice(&index.to_le_bytes());
            G::hash_to_group(KEY_DOMAIN, &msg)
        };
        let basis = (0..=max_degree as u64).map(|i| derive(b"g", i)).collect();
        Ok(CommitKey {
            seed: seed.to_vec(),
            basis,
            h: derive(b"h", 0),
            u: derive(b"u", 0),
        })
    }

    pub fn max_degree(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    pub fn basis(&self) -> &[G] {
        &self.basis
    }

    pub fn h(&self) -> G {
        self.h
    }

    pub fn u(&self) -> G {
        self.u
    }

    fn check_degree(&self, poly: &Polynomial<G::Scalar, Coeff>, bound: usize) -> Result<()> {
        if bound > self.max_degree() {
            return Err(Error::DegreeBoundExceeded {
                degree: bound,
                bound: self.max_degree(),
            });
        }
        let degree = poly.degree();
        if degree > bound {
            return Err(Error::DegreeBoundExceeded { degree, bound });
        }
        Ok(())
    }

    /// `Σ g_i·G_i + r·H` for `deg g ≤ bound`.
    pub fn commit(
        &self,
        poly: &Polynomial<G::Scalar, Coeff>,
        bound: usize,
        blind: G::Scalar,
    ) -> Result<PolyCommitment<G>> {
        self.check_degree(poly, bound)?;
        let len = poly.len().min(bound + 1);
        let point = G::msm(&self.basis[..len], &poly.values()[..len]) + self.h * blind;
        Ok(PolyCommitment {
            point,
            degree_bound: bound,
        })
    }

    /// Commits to a vector of coefficients directly.
    pub fn commit_coeffs(&self, coeffs: &[G::Scalar], bound: usize, blind: G::Scalar) -> Result<PolyCommitment<G>> {
        self.commit(&Polynomial::from_vec(coeffs.to_vec()), bound, blind)
    }

    /// True iff `c` is the commitment to `poly` under `blind`.
    pub fn verify_open(
        &self,
        c: &PolyCommitment<G>,
        poly: &Polynomial<G::Scalar, Coeff>,
        bound: usize,
        blind: G::Scalar,
    ) -> bool {
        match self.commit(poly, bound, blind) {
            Ok(expected) => expected == *c,
            Err(_) => false,
        }
    }

    /// Parameter file body: seed and max degree; generators are re-derived
    /// on load.
    pub fn write(&self, w: &mut Writer) {
        w.put_bytes(&self.seed);
        w.put_len(self.max_degree());
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let seed = r.get_bytes()?.to_vec();
        let max_degree = r.get_len(0)?;
        if max_degree > (1 << 24) {
            return Err(Error::ProofDecode(format!("max degree {max_degree} too large")));
        }
        Self::setup(&seed, max_degree)
    }
}

/// A commitment point together with the degree bound it was made for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyCommitment<G> {
    pub point: G,
    pub degree_bound: usize,
}

const COMMITMENT_MAGIC: &[u8; 4] = b"ACP1";

impl<G: PrimeGroup> PolyCommitment<G> {
    pub fn new(point: G, degree_bound: usize) -> Self {
        PolyCommitment {
            point,
            degree_bound,
        }
    }

    /// `ACP1 ‖ degree bound (u64) ‖ point`.
    pub fn write(&self, w: &mut Writer) {
        w.put_raw(COMMITMENT_MAGIC);
        w.put_len(self.degree_bound);
        w.put_point(&self.point);
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        r.expect_raw(COMMITMENT_MAGIC)?;
        let degree_bound = r.get_len(0)?;
        let point = r.get_point()?;
        Ok(PolyCommitment {
            point,
            degree_bound,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let c = Self::read(&mut r)?;
        r.finish()?;
        Ok(c)
    }
}

impl<G: PrimeGroup> Add for PolyCommitment<G> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        PolyCommitment {
            point: self.point + rhs.point,
            degree_bound: self.degree_bound.max(rhs.degree_bound),
        }
    }
}

impl<G: PrimeGroup> Sub for PolyCommitment<G> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        PolyCommitment {
            point: self.point - rhs.point,
            degree_bound: self.degree_bound.max(rhs.degree_bound),
        }
    }
}

impl<G: PrimeGroup> Mul<G::Scalar> for PolyCommitment<G> {
    type Output = Self;
    fn mul(self, rhs: G::Scalar) -> Self {
        PolyCommitment {
            point: self.point * rhs,
            degree_bound: self.degree_bound,
        }
    }
}

/// `Σ scalars[i]·commitments[i]` for commitments sharing a key.
pub fn combine<G: PrimeGroup>(commitments: &[PolyCommitment<G>], scalars: &[G::Scalar]) -> PolyCommitment<G> {
    let points: Vec<G> = commitments.iter().map(|c| c.point).collect();
    let bound = commitments.iter().map(|c| c.degree_bound).max().unwrap_or(0);
    PolyCommitment {
        point: G::msm(&points, scalars),
        degree_bound: bound,
    }
}
