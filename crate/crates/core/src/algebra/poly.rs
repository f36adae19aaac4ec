use std::marker::PhantomData;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Representation tag of a [`Polynomial`].
pub trait Basis: Copy + std::fmt::Debug + Send + Sync + 'static {}

/// Coefficients, lowest degree first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coeff;
impl Basis for Coeff {}

/// Evaluations over the base evaluation domain `ω^0..ω^{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LagrangeCoeff;
impl Basis for LagrangeCoeff {}

/// Evaluations over a coset of an extended domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtendedLagrangeCoeff;
impl Basis for ExtendedLagrangeCoeff {}

/// Dense polynomial tagged with its representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<F, B> {
    values: Vec<F>,
    _basis: PhantomData<B>,
}

impl<F: PrimeField, B: Basis> Polynomial<F, B> {
    pub fn from_vec(values: Vec<F>) -> Self {
        Polynomial {
            values,
            _basis: PhantomData,
        }
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<F> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.values.iter()
    }

    pub fn scale(&self, factor: F) -> Self {
        Self::from_vec(self.values.iter().map(|v| *v * factor).collect())
    }

    /// `self + factor * other`, extending with zeros as needed.
    pub fn add_scaled(&self, other: &Self, factor: F) -> Self {
        let len = self.len().max(other.len());
        let mut out = self.values.clone();
        out.resize(len, F::ZERO);
        for (o, v) in out.iter_mut().zip(other.values.iter()) {
            *o += *v * factor;
        }
        Self::from_vec(out)
    }
}

impl<F: PrimeField, B: Basis> Index<usize> for Polynomial<F, B> {
    type Output = F;
    fn index(&self, i: usize) -> &F {
        &self.values[i]
    }
}

impl<F: PrimeField, B: Basis> IndexMut<usize> for Polynomial<F, B> {
    fn index_mut(&mut self, i: usize) -> &mut F {
        &mut self.values[i]
    }
}

impl<F: PrimeField, B: Basis> Add for &Polynomial<F, B> {
    type Output = Polynomial<F, B>;
    fn add(self, rhs: Self) -> Polynomial<F, B> {
        self.add_scaled(rhs, F::ONE)
    }
}

impl<F: PrimeField, B: Basis> Sub for &Polynomial<F, B> {
    type Output = Polynomial<F, B>;
    fn sub(self, rhs: Self) -> Polynomial<F, B> {
        self.add_scaled(rhs, -F::ONE)
    }
}

impl<F: PrimeField> Polynomial<F, Coeff> {
    pub fn zero() -> Self {
        Self::from_vec(Vec::new())
    }

    pub fn constant(c: F) -> Self {
        Self::from_vec(vec![c])
    }

    /// Degree ignoring trailing zero coefficients; the zero polynomial has
    /// degree 0.
    pub fn degree(&self) -> usize {
        self.values
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|c| c.is_zero())
    }

    pub fn evaluate(&self, x: F) -> F {
        horner_eval(&self.values, x)
    }

    /// Returns `(q, r)` with `self = q·(X - x) + r`.
    pub fn divide_linear(&self, x: F) -> (Self, F) {
        poly_divide_linear(self, x)
    }

    /// Schoolbook product; only used for small polynomials and tests.
    pub fn naive_mul(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::zero();
        }
        let mut out = vec![F::ZERO; self.len() + other.len() - 1];
        for (i, a) in self.values.iter().enumerate() {
            for (j, b) in other.values.iter().enumerate() {
                out[i + j] += *a * *b;
            }
        }
        Self::from_vec(out)
    }

    /// Pads or truncates the coefficient vector to `len`.
    pub fn resized(&self, len: usize) -> Self {
        let mut v = self.values.clone();
        v.resize(len, F::ZERO);
        Self::from_vec(v)
    }
}

impl<F: PrimeField> Mul<F> for &Polynomial<F, Coeff> {
    type Output = Polynomial<F, Coeff>;
    fn mul(self, rhs: F) -> Polynomial<F, Coeff> {
        self.scale(rhs)
    }
}

/// Evaluates `Σ g_i x^i` by the nested form `g_0 + x(g_1 + x(g_2 + …))`.
pub fn horner_eval<F: PrimeField>(coeffs: &[F], x: F) -> F {
    coeffs.iter().rev().fold(F::ZERO, |acc, c| acc * x + *c)
}

/// Synthetic division by `X - x`.
pub fn poly_divide_linear<F: PrimeField>(
    g: &Polynomial<F, Coeff>,
    x: F,
) -> (Polynomial<F, Coeff>, F) {
    let coeffs = g.values();
    if coeffs.is_empty() {
        return (Polynomial::zero(), F::ZERO);
    }
    let mut quotient = vec![F::ZERO; coeffs.len() - 1];
    let mut carry = F::ZERO;
    for i in (0..coeffs.len()).rev() {
        let cur = coeffs[i] + carry * x;
        if i == 0 {
            return (Polynomial::from_vec(quotient), cur);
        }
        quotient[i - 1] = cur;
        carry = cur;
    }
    unreachable!()
}

/// Exact division by `X^n - 1`.
pub fn divide_by_vanishing<F: PrimeField>(
    g: &Polynomial<F, Coeff>,
    n: usize,
) -> Result<Polynomial<F, Coeff>> {
    let (quotient, remainder) = divide_by_vanishing_with_remainder(g, n);
    if remainder.iter().any(|c| !c.is_zero()) {
        return Err(Error::NotDivisibleByVanishing);
    }
    Ok(quotient)
}

/// Long division by `X^n - 1`, returning the quotient and the low `n`
/// remainder coefficients.
pub fn divide_by_vanishing_with_remainder<F: PrimeField>(
    g: &Polynomial<F, Coeff>,
    n: usize,
) -> (Polynomial<F, Coeff>, Vec<F>) {
    let mut rem = g.values().to_vec();
    if rem.len() <= n {
        rem.resize(n, F::ZERO);
        return (Polynomial::zero(), rem);
    }
    let mut quotient = vec![F::ZERO; rem.len() - n];
    for i in (n..rem.len()).rev() {
        let c = rem[i];
        quotient[i - n] = c;
        rem[i - n] += c;
        rem[i] = F::ZERO;
    }
    rem.truncate(n);
    (Polynomial::from_vec(quotient), rem)
}
