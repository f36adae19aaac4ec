use super::field::{batch_invert, PrimeField};
use super::poly::{Coeff, ExtendedLagrangeCoeff, LagrangeCoeff, Polynomial};
use crate::error::{Error, Result};

/// The multiplicative subgroup `{ω^0, …, ω^{n-1}}` with `n = 2^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationDomain<F> {
    log_size: u32,
    size: usize,
    omega: F,
    omega_inv: F,
    size_inv: F,
}

impl<F: PrimeField> EvaluationDomain<F> {
    pub fn new(log_size: u32) -> Result<Self> {
        if log_size > F::TWO_ADICITY || log_size >= usize::BITS - 1 {
            return Err(Error::DomainTooLarge { log_size });
        }
        let mut omega = F::two_adic_root_of_unity();
        for _ in log_size..F::TWO_ADICITY {
            omega = omega.square();
        }
        let size = 1usize << log_size;
        Ok(EvaluationDomain {
            log_size,
            size,
            omega,
            omega_inv: omega.inverse().expect("root of unity is non-zero"),
            size_inv: F::from_u64(size as u64)
                .inverse()
                .expect("domain size below characteristic"),
        })
    }

    pub fn log_size(&self) -> u32 {
        self.log_size
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn omega(&self) -> F {
        self.omega
    }

    pub fn omega_inv(&self) -> F {
        self.omega_inv
    }

    pub fn size_inv(&self) -> F {
        self.size_inv
    }

    /// `ω^j` for `j` in `0..n`.
    pub fn elements(&self) -> Vec<F> {
        powers(self.omega, self.size)
    }

    /// `x · ω^rotation`.
    pub fn rotate(&self, x: F, rotation: i32) -> F {
        let step = if rotation >= 0 {
            self.omega
        } else {
            self.omega_inv
        };
        x * step.pow_u64(rotation.unsigned_abs() as u64)
    }

    /// `Z(x) = x^n - 1`.
    pub fn vanishing_eval(&self, x: F) -> F {
        x.pow_u64(self.size as u64) - F::ONE
    }

    /// Evaluates the Lagrange basis polynomials `L_i` for every `i` in
    /// `rows` at `x`.
    pub fn lagrange_evals(&self, rows: impl IntoIterator<Item = usize>, x: F) -> Vec<F> {
        let rows: Vec<usize> = rows.into_iter().collect();
        let zx = self.vanishing_eval(x);
        let points: Vec<F> = rows
            .iter()
            .map(|&i| self.omega.pow_u64(i as u64))
            .collect();
        if zx.is_zero() {
            // x is itself a domain point.
            return points
                .iter()
                .map(|p| if *p == x { F::ONE } else { F::ZERO })
                .collect();
        }
        let mut denoms: Vec<F> = points.iter().map(|p| x - *p).collect();
        batch_invert(&mut denoms);
        let common = zx * self.size_inv;
        points
            .iter()
            .zip(denoms)
            .map(|(p, d)| *p * common * d)
            .collect()
    }

    /// `Σ values[j]·L_j(x)` without interpolating.
    pub fn evaluate_lagrange(&self, values: &[F], x: F) -> F {
        let nonzero: Vec<usize> = (0..values.len().min(self.size))
            .filter(|&j| !values[j].is_zero())
            .collect();
        let basis = self.lagrange_evals(nonzero.iter().copied(), x);
        nonzero
            .iter()
            .zip(basis)
            .map(|(&j, l)| values[j] * l)
            .sum()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size {
            return Err(Error::DomainSizeMismatch {
                expected: self.size,
                actual: len,
            });
        }
        Ok(())
    }

    /// `result[j] = Σ_i values[i]·ω^{ij}`.
    pub fn ntt(&self, values: &[F]) -> Result<Vec<F>> {
        self.check_len(values.len())?;
        let mut out = values.to_vec();
        radix2_transform(&mut out, self.omega, self.log_size);
        Ok(out)
    }

    pub fn intt(&self, values: &[F]) -> Result<Vec<F>> {
        self.check_len(values.len())?;
        let mut out = values.to_vec();
        radix2_transform(&mut out, self.omega_inv, self.log_size);
        for v in out.iter_mut() {
            *v *= self.size_inv;
        }
        Ok(out)
    }

    pub fn lagrange_from_vec(&self, values: Vec<F>) -> Result<Polynomial<F, LagrangeCoeff>> {
        self.check_len(values.len())?;
        Ok(Polynomial::from_vec(values))
    }

    /// The unique polynomial of degree `< n` with `g(ω^j) = evals[j]`.
    pub fn interpolate(&self, evals: &Polynomial<F, LagrangeCoeff>) -> Result<Polynomial<F, Coeff>> {
        Ok(Polynomial::from_vec(self.intt(evals.values())?))
    }

    /// Evaluates a coefficient-form polynomial over the domain.
    pub fn evaluate_over_domain(&self, poly: &Polynomial<F, Coeff>) -> Result<Polynomial<F, LagrangeCoeff>> {
        if poly.len() > self.size {
            return Err(Error::DomainSizeMismatch {
                expected: self.size,
                actual: poly.len(),
            });
        }
        Ok(Polynomial::from_vec(self.ntt(poly.resized(self.size).values())?))
    }

    /// Evaluates `poly` over the coset `shift·{ω^j}` of this domain.
    pub fn coset_ntt(&self, poly: &Polynomial<F, Coeff>, shift: F) -> Result<Polynomial<F, ExtendedLagrangeCoeff>> {
        if poly.len() > self.size {
            return Err(Error::DomainSizeMismatch {
                expected: self.size,
                actual: poly.len(),
            });
        }
        let mut coeffs = poly.resized(self.size).into_vec();
        let mut s = F::ONE;
        for c in coeffs.iter_mut() {
            *c *= s;
            s *= shift;
        }
        radix2_transform(&mut coeffs, self.omega, self.log_size);
        Ok(Polynomial::from_vec(coeffs))
    }

    /// Inverse of [`Self::coset_ntt`].
    pub fn coset_intt(&self, evals: Polynomial<F, ExtendedLagrangeCoeff>, shift: F) -> Result<Polynomial<F, Coeff>> {
        let mut coeffs = self.intt(evals.values())?;
        let shift_inv = shift.inverse().ok_or(Error::InverseOfZero)?;
        let mut s = F::ONE;
        for c in coeffs.iter_mut() {
            *c *= s;
            s *= shift_inv;
        }
        Ok(Polynomial::from_vec(coeffs))
    }
}

/// `[1, base, base^2, …]` with `len` entries.
pub fn powers<F: PrimeField>(base: F, len: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(len);
    let mut cur = F::ONE;
    for _ in 0..len {
        out.push(cur);
        cur *= base;
    }
    out
}

fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// In-place iterative Cooley-Tukey over a root `omega` of order `2^log_n`.
fn radix2_transform<F: PrimeField>(a: &mut [F], omega: F, log_n: u32) {
    let n = a.len();
    for i in 0..n {
        let j = bit_reverse(i, log_n);
        if i < j {
            a.swap(i, j);
        }
    }
    let twiddles = powers(omega, n / 2);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..half {
                let t = a[start + j + half] * twiddles[j * stride];
                let u = a[start + j];
                a[start + j] = u + t;
                a[start + j + half] = u - t;
            }
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::F17;
    use pasta_curves::pallas;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    type Fq = pallas::Scalar;

    fn naive_dft<F: PrimeField>(values: &[F], omega: F) -> Vec<F> {
        let n = values.len();
        (0..n)
            .map(|j| {
                let w = omega.pow_u64(j as u64);
                let mut acc = F::ZERO;
                let mut p = F::ONE;
                for v in values {
                    acc += *v * p;
                    p *= w;
                }
                acc
            })
            .collect()
    }

    #[test]
    fn domain_root_has_exact_order() {
        for k in 0..=10 {
            let d = EvaluationDomain::<Fq>::new(k).unwrap();
            let w = d.omega();
            assert_eq!(w.pow_u64(d.size() as u64), Fq::ONE);
            if k > 0 {
                assert_ne!(w.pow_u64(d.size() as u64 / 2), Fq::ONE);
            }
        }
        assert!(EvaluationDomain::<F17>::new(5).is_err());
    }

    #[test]
    fn f17_ntt_examples() {
        let d = EvaluationDomain::<F17>::new(2).unwrap();
        assert_eq!(d.omega(), F17::new(13));
        let one_hot = [F17::new(0), F17::new(1), F17::new(0), F17::new(0)];
        assert_eq!(
            d.ntt(&one_hot).unwrap(),
            vec![F17::new(1), F17::new(13), F17::new(16), F17::new(4)]
        );
        let constant = [F17::new(1), F17::ZERO, F17::ZERO, F17::ZERO];
        assert_eq!(d.ntt(&constant).unwrap(), vec![F17::ONE; 4]);
        assert_eq!(
            d.ntt(&[F17::ONE; 3]),
            Err(Error::DomainSizeMismatch {
                expected: 4,
                actual: 3
            })
        );
    }

    #[test]
    fn ntt_matches_naive_dft() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for k in 0..=8 {
            let d = EvaluationDomain::<Fq>::new(k).unwrap();
            let v: Vec<Fq> = (0..d.size()).map(|_| Fq::random(&mut rng)).collect();
            let fast = d.ntt(&v).unwrap();
            assert_eq!(fast, naive_dft(&v, d.omega()));
            assert_eq!(d.intt(&fast).unwrap(), v);
        }
    }

    #[test]
    fn interpolation_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let d = EvaluationDomain::<Fq>::new(4).unwrap();
        let zero = d.lagrange_from_vec(vec![Fq::ZERO; 16]).unwrap();
        assert!(d.interpolate(&zero).unwrap().is_zero());
        let c = Fq::from_u64(42);
        let flat = d.interpolate(&d.lagrange_from_vec(vec![c; 16]).unwrap()).unwrap();
        assert_eq!(flat.degree(), 0);
        assert_eq!(flat[0], c);

        let evals: Vec<Fq> = (0..16).map(|_| Fq::random(&mut rng)).collect();
        let poly = d.interpolate(&d.lagrange_from_vec(evals.clone()).unwrap()).unwrap();
        for (j, w) in d.elements().into_iter().enumerate() {
            assert_eq!(poly.evaluate(w), evals[j]);
        }
        let x = Fq::random(&mut rng);
        assert_eq!(d.evaluate_lagrange(&evals, x), poly.evaluate(x));
        assert_eq!(d.evaluate_lagrange(&evals, d.omega()), evals[1]);
    }

    #[test]
    fn coset_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let d = EvaluationDomain::<Fq>::new(5).unwrap();
        let poly = Polynomial::from_vec((0..20).map(|_| Fq::random(&mut rng)).collect());
        let shift = Fq::multiplicative_generator();
        let ext = d.coset_ntt(&poly, shift).unwrap();
        let pts = d.elements();
        assert_eq!(ext[3], poly.evaluate(shift * pts[3]));
        let back = d.coset_intt(ext, shift).unwrap();
        assert_eq!(back.resized(20), poly);
    }
}
