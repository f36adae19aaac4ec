use sha2::{Digest, Sha256};

use crate::algebra::{Coeff, EvaluationDomain, ExtendedLagrangeCoeff, Polynomial, PrimeField};
use crate::codec::{Reader, Writer};
use crate::commit::{CommitKey, PrimeGroup};
use crate::error::{Error, Result};
use crate::plonkish::{permutation, CircuitIndex, ConstraintSystem, BLINDING_RESERVE};

/// Verifier's view of an indexed circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyingKey<G: PrimeGroup> {
    k: u32,
    cs: ConstraintSystem<G::Scalar>,
    fixed_commitments: Vec<G>,
    sigma_commitments: Vec<G>,
    digest: [u8; 32],
}

impl<G: PrimeGroup> VerifyingKey<G> {
    fn new(k: u32, cs: ConstraintSystem<G::Scalar>, fixed_commitments: Vec<G>, sigma_commitments: Vec<G>) -> Self {
        let mut vk = VerifyingKey {
            k,
            cs,
            fixed_commitments,
            sigma_commitments,
            digest: [0; 32],
        };
        let mut w = Writer::new();
        vk.write_body(&mut w);
        vk.digest = Sha256::digest(w.into_bytes()).into();
        vk
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        1 << self.k
    }

    pub fn usable_rows(&self) -> usize {
        self.n() - BLINDING_RESERVE
    }

    pub fn cs(&self) -> &ConstraintSystem<G::Scalar> {
        &self.cs
    }

    pub fn fixed_commitments(&self) -> &[G] {
        &self.fixed_commitments
    }

    pub fn sigma_commitments(&self) -> &[G] {
        &self.sigma_commitments
    }

    /// Hash of the serialized key; the first transcript message.
    pub fn digest(&self) -> [u8; 32] {
        self.digest
    }

    /// For each advice column: its commitment round (1-based) and its
    /// position among that round's oracles.
    pub fn advice_oracles(&self) -> Vec<(u8, usize)> {
        let mut seen = vec![0usize; self.cs.num_phases() as usize];
        self.cs
            .advice_phases
            .iter()
            .map(|&p| {
                let pos = seen[p as usize];
                seen[p as usize] += 1;
                (p + 1, pos)
            })
            .collect()
    }

    fn write_body(&self, w: &mut Writer) {
        w.put_u32(self.k);
        self.cs.write(w);
        w.put_points(&self.fixed_commitments);
        w.put_points(&self.sigma_commitments);
    }

    pub fn write(&self, w: &mut Writer) {
        w.section(b"AVK1", |s| self.write_body(s));
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let mut s = r.section(b"AVK1")?;
        let k = s.get_u32()?;
        let cs = ConstraintSystem::<G::Scalar>::read(&mut s)?;
        let fixed = s.get_points()?;
        let sigma = s.get_points()?;
        s.finish()?;
        if fixed.len() != cs.num_fixed || sigma.len() != cs.permutation_columns.len() {
            return Err(Error::ProofDecode("verifying key commitment counts".into()));
        }
        Ok(Self::new(k, cs, fixed, sigma))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }
}

/// Prover's view: the index, its polynomials in coefficient and
/// extended-coset form, and the selector polynomials.
#[derive(Clone, Debug)]
pub struct ProvingKey<G: PrimeGroup> {
    pub(crate) vk: VerifyingKey<G>,
    pub(crate) index: CircuitIndex<G::Scalar>,
    pub(crate) domain: EvaluationDomain<G::Scalar>,
    pub(crate) ext_domain: EvaluationDomain<G::Scalar>,
    pub(crate) coset_shift: G::Scalar,
    pub(crate) fixed_polys: Vec<Polynomial<G::Scalar, Coeff>>,
    pub(crate) fixed_cosets: Vec<Polynomial<G::Scalar, ExtendedLagrangeCoeff>>,
    pub(crate) sigma_polys: Vec<Polynomial<G::Scalar, Coeff>>,
    pub(crate) sigma_cosets: Vec<Polynomial<G::Scalar, ExtendedLagrangeCoeff>>,
    pub(crate) l0: Polynomial<G::Scalar, ExtendedLagrangeCoeff>,
    pub(crate) l_last: Polynomial<G::Scalar, ExtendedLagrangeCoeff>,
    pub(crate) l_active: Polynomial<G::Scalar, ExtendedLagrangeCoeff>,
}

impl<G: PrimeGroup> ProvingKey<G> {
    pub fn vk(&self) -> &VerifyingKey<G> {
        &self.vk
    }

    pub fn index(&self) -> &CircuitIndex<G::Scalar> {
        &self.index
    }

    pub fn fixed_polys(&self) -> &[Polynomial<G::Scalar, Coeff>] {
        &self.fixed_polys
    }

    pub fn sigma_polys(&self) -> &[Polynomial<G::Scalar, Coeff>] {
        &self.sigma_polys
    }

    /// Rows of the extended domain per base-domain row.
    pub(crate) fn ext_factor(&self) -> usize {
        self.ext_domain.size() / self.domain.size()
    }

    pub(crate) fn to_coset(&self, poly: &Polynomial<G::Scalar, Coeff>) -> Polynomial<G::Scalar, ExtendedLagrangeCoeff> {
        self.ext_domain
            .coset_ntt(poly, self.coset_shift)
            .expect("polynomial fits the extended domain")
    }
}

/// Indexes a circuit: commits (without blinding) to its fixed and σ
/// polynomials and precomputes everything the prover reuses.
pub fn index<G: PrimeGroup>(
    ck: &CommitKey<G>,
    circuit: &CircuitIndex<G::Scalar>,
) -> Result<(ProvingKey<G>, VerifyingKey<G>)> {
    let n = circuit.n();
    if ck.basis().len() < n {
        return Err(Error::DegreeCapacityExceeded {
            needed: n,
            available: ck.basis().len(),
        });
    }
    let cs = circuit.cs();
    let domain = circuit.domain();
    // t = g/Z_H has degree below (degree − 1)·n.
    let ext_log = circuit.k() + ((cs.degree() - 1).next_power_of_two().trailing_zeros());
    let ext_domain = EvaluationDomain::new(ext_log)?;
    let coset_shift = G::Scalar::multiplicative_generator();

    let interpolate = |values: &[G::Scalar]| -> Result<Polynomial<G::Scalar, Coeff>> {
        domain.interpolate(&domain.lagrange_from_vec(values.to_vec())?)
    };
    let fixed_polys = circuit.fixed().iter().map(|c| interpolate(c)).collect::<Result<Vec<_>>>()?;
    let sigma_polys = permutation::sigma_lagrange(circuit)
        .iter()
        .map(|c| interpolate(c))
        .collect::<Result<Vec<_>>>()?;

    let bound = n - 1;
    let commit_all = |polys: &[Polynomial<G::Scalar, Coeff>]| -> Result<Vec<G>> {
        polys
            .iter()
            .map(|p| ck.commit(p, bound, G::Scalar::ZERO).map(|c| c.point))
            .collect()
    };
    let vk = VerifyingKey::new(circuit.k(), cs.clone(), commit_all(&fixed_polys)?, commit_all(&sigma_polys)?);

    let usable = circuit.usable_rows();
    let selector = |f: &dyn Fn(usize) -> bool| -> Result<Polynomial<G::Scalar, Coeff>> {
        let v: Vec<G::Scalar> = (0..n).map(|j| if f(j) { G::Scalar::ONE } else { G::Scalar::ZERO }).collect();
        interpolate(&v)
    };
    let to_coset = |p: &Polynomial<G::Scalar, Coeff>| ext_domain.coset_ntt(p, coset_shift);
    let pk = ProvingKey {
        fixed_cosets: fixed_polys.iter().map(to_coset).collect::<Result<_>>()?,
        sigma_cosets: sigma_polys.iter().map(to_coset).collect::<Result<_>>()?,
        l0: to_coset(&selector(&|j| j == 0)?)?,
        l_last: to_coset(&selector(&|j| j == usable)?)?,
        l_active: to_coset(&selector(&|j| j < usable)?)?,
        vk: vk.clone(),
        index: circuit.clone(),
        domain,
        ext_domain,
        coset_shift,
        fixed_polys,
        sigma_polys,
    };
    Ok((pk, vk))
}
