//! KZG commitments checked with the trapdoor instead of a pairing.
//!
//! Whoever holds `τ` can forge openings, so this scheme exists purely as a
//! test double for exercising code against a second homomorphic commitment.
//! Outside test builds (or the `trapdoor-kzg` feature) setup always fails.

use crate::algebra::{powers, Coeff, Polynomial, PrimeField};
use crate::error::{Error, Result};

use super::group::PrimeGroup;

#[derive(Clone, Debug)]
pub struct TrapdoorKzg<G: PrimeGroup> {
    tau: G::Scalar,
    powers: Vec<G>,
}

impl<G: PrimeGroup> TrapdoorKzg<G> {
    /// `[τ^i]·G` for `i ≤ max_degree`, keeping `τ`.
    pub fn setup(tau: G::Scalar, max_degree: usize) -> Result<Self> {
        if cfg!(any(test, feature = "trapdoor-kzg")) {
            let g = G::generator();
            Ok(TrapdoorKzg {
                tau,
                powers: powers(tau, max_degree + 1).into_iter().map(|t| g * t).collect(),
            })
        } else {
            let _ = (tau, max_degree);
            Err(Error::TrapdoorSchemeForbidden)
        }
    }

    pub fn max_degree(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn commit(&self, poly: &Polynomial<G::Scalar, Coeff>) -> Result<G> {
        let degree = poly.degree();
        if degree > self.max_degree() {
            return Err(Error::DegreeBoundExceeded {
                degree,
                bound: self.max_degree(),
            });
        }
        let len = poly.len().min(self.powers.len());
        Ok(G::msm(&self.powers[..len], &poly.values()[..len]))
    }

    /// Commits to `q = (g − y)/(X − x)`, refusing if the division leaves a
    /// remainder.
    pub fn open(&self, poly: &Polynomial<G::Scalar, Coeff>, x: G::Scalar, y: G::Scalar) -> Result<G> {
        let shifted = poly.add_scaled(&Polynomial::constant(y), -G::Scalar::ONE);
        let (quotient, remainder) = shifted.divide_linear(x);
        if !remainder.is_zero() {
            return Err(Error::ClaimedValueWrong);
        }
        self.commit(&quotient)
    }

    /// `c − y·G = (τ − x)·π`, the identity a pairing check would establish.
    pub fn check(&self, commitment: &G, x: G::Scalar, y: G::Scalar, proof: &G) -> bool {
        *commitment - G::generator() * y == *proof * (self.tau - x)
    }
}
