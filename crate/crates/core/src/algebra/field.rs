use std::fmt::Debug;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use ff::{Field as _, FromUniformBytes, PrimeField as _};
use pasta_curves::pallas;
use rand::RngCore;

/// A prime field with a large power-of-two multiplicative subgroup.
///
/// Everything above the field layer (polynomials, commitments, circuits,
/// proofs) is written against this trait, so the same code runs over the
/// Pallas scalar field and over the toy field [`F17`].
pub trait PrimeField:
    Copy
    + Debug
    + Default
    + Eq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Product
{
    const ZERO: Self;
    const ONE: Self;
    /// Bytes in the canonical little-endian encoding.
    const ENCODED_LEN: usize;
    /// Largest `s` with `2^s | p - 1`.
    const TWO_ADICITY: u32;
    const NUM_BITS: u32;

    fn from_u64(v: u64) -> Self;

    fn inverse(&self) -> Option<Self>;

    /// A primitive `2^TWO_ADICITY`-th root of unity.
    fn two_adic_root_of_unity() -> Self;

    /// A generator of the full multiplicative group.
    fn multiplicative_generator() -> Self;

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self;

    /// Reduces 64 uniform bytes modulo `p`.
    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self;

    fn to_le_bytes(&self) -> Vec<u8>;

    /// Parses a canonical encoding; rejects non-reduced values.
    fn from_le_bytes(bytes: &[u8]) -> Option<Self>;

    fn from_i64(v: i64) -> Self {
        if v < 0 {
            -Self::from_u64(v.unsigned_abs())
        } else {
            Self::from_u64(v as u64)
        }
    }

    fn from_i128(v: i128) -> Self {
        let mag = v.unsigned_abs();
        let lo = Self::from_u64(mag as u64);
        let hi = Self::from_u64((mag >> 64) as u64);
        let two64 = Self::from_u64(1 << 32) * Self::from_u64(1 << 32);
        let m = hi * two64 + lo;
        if v < 0 {
            -m
        } else {
            m
        }
    }

    fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    fn square(&self) -> Self {
        *self * *self
    }

    fn double(&self) -> Self {
        *self + *self
    }

    fn pow_u64(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }
}

/// Inverts every element in place; zeros are left untouched.
pub fn batch_invert<F: PrimeField>(values: &mut [F]) {
    let mut prefix = Vec::with_capacity(values.len());
    let mut acc = F::ONE;
    for v in values.iter() {
        prefix.push(acc);
        if !v.is_zero() {
            acc *= *v;
        }
    }
    let mut inv = acc.inverse().expect("product of non-zero elements");
    for (v, p) in values.iter_mut().zip(prefix).rev() {
        if v.is_zero() {
            continue;
        }
        let next = inv * *v;
        *v = inv * p;
        inv = next;
    }
}

impl PrimeField for pallas::Scalar {
    const ZERO: Self = <pallas::Scalar as ff::Field>::ZERO;
    const ONE: Self = <pallas::Scalar as ff::Field>::ONE;
    const ENCODED_LEN: usize = 32;
    const TWO_ADICITY: u32 = <pallas::Scalar as ff::PrimeField>::S;
    const NUM_BITS: u32 = <pallas::Scalar as ff::PrimeField>::NUM_BITS;

    fn from_u64(v: u64) -> Self {
        pallas::Scalar::from(v)
    }

    fn inverse(&self) -> Option<Self> {
        Option::from(self.invert())
    }

    fn two_adic_root_of_unity() -> Self {
        <pallas::Scalar as ff::PrimeField>::ROOT_OF_UNITY
    }

    fn multiplicative_generator() -> Self {
        <pallas::Scalar as ff::PrimeField>::MULTIPLICATIVE_GENERATOR
    }

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        <pallas::Scalar as FromUniformBytes<64>>::from_uniform_bytes(&wide)
    }

    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self {
        <pallas::Scalar as FromUniformBytes<64>>::from_uniform_bytes(bytes)
    }

    fn to_le_bytes(&self) -> Vec<u8> {
        self.to_repr().to_vec()
    }

    fn from_le_bytes(bytes: &[u8]) -> Option<Self> {
        let repr: [u8; 32] = bytes.try_into().ok()?;
        Option::from(pallas::Scalar::from_repr(repr))
    }

    fn square(&self) -> Self {
        ff::Field::square(self)
    }
}

const F17_MODULUS: u8 = 17;

/// The field with 17 elements. Small enough to enumerate; used for
/// hand-checkable examples and exhaustive tests. Not cryptographic.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F17(u8);

impl F17 {
    pub const fn new(v: u8) -> Self {
        F17(v % F17_MODULUS)
    }

    pub fn value(&self) -> u8 {
        self.0
    }

    /// All field elements in order.
    pub fn elements() -> impl Iterator<Item = F17> {
        (0..F17_MODULUS).map(F17)
    }
}

impl Debug for F17 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F17({})", self.0)
    }
}

impl Add for F17 {
    type Output = F17;
    fn add(self, rhs: F17) -> F17 {
        F17((self.0 + rhs.0) % F17_MODULUS)
    }
}

impl Sub for F17 {
    type Output = F17;
    fn sub(self, rhs: F17) -> F17 {
        F17((self.0 + F17_MODULUS - rhs.0) % F17_MODULUS)
    }
}

impl Mul for F17 {
    type Output = F17;
    fn mul(self, rhs: F17) -> F17 {
        F17(((self.0 as u16 * rhs.0 as u16) % F17_MODULUS as u16) as u8)
    }
}

impl Neg for F17 {
    type Output = F17;
    fn neg(self) -> F17 {
        F17((F17_MODULUS - self.0) % F17_MODULUS)
    }
}

impl AddAssign for F17 {
    fn add_assign(&mut self, rhs: F17) {
        *self = *self + rhs;
    }
}

impl SubAssign for F17 {
    fn sub_assign(&mut self, rhs: F17) {
        *self = *self - rhs;
    }
}

impl MulAssign for F17 {
    fn mul_assign(&mut self, rhs: F17) {
        *self = *self * rhs;
    }
}

impl Sum for F17 {
    fn sum<I: Iterator<Item = F17>>(iter: I) -> F17 {
        iter.fold(F17(0), |a, b| a + b)
    }
}

impl Product for F17 {
    fn product<I: Iterator<Item = F17>>(iter: I) -> F17 {
        iter.fold(F17(1), |a, b| a * b)
    }
}

impl PrimeField for F17 {
    const ZERO: Self = F17(0);
    const ONE: Self = F17(1);
    const ENCODED_LEN: usize = 1;
    const TWO_ADICITY: u32 = 4;
    const NUM_BITS: u32 = 5;

    fn from_u64(v: u64) -> Self {
        F17((v % F17_MODULUS as u64) as u8)
    }

    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow_u64(F17_MODULUS as u64 - 2))
    }

    fn two_adic_root_of_unity() -> Self {
        // 3 generates the whole group of order 16.
        F17(3)
    }

    fn multiplicative_generator() -> Self {
        F17(3)
    }

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Self::from_uniform_bytes(&wide)
    }

    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self {
        let r = bytes
            .iter()
            .rev()
            .fold(0u32, |acc, b| (acc * 256 + *b as u32) % F17_MODULUS as u32);
        F17(r as u8)
    }

    fn to_le_bytes(&self) -> Vec<u8> {
        vec![self.0]
    }

    fn from_le_bytes(bytes: &[u8]) -> Option<Self> {
        match bytes {
            [b] if *b < F17_MODULUS => Some(F17(*b)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::{batch_invert, PrimeField, F17};
    use pasta_curves::pallas;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    type Fq = pallas::Scalar;

    #[test]
    fn f17_inverses() {
        assert_eq!(F17::new(1).inverse(), Some(F17::new(1)));
        assert_eq!(F17::new(2).inverse(), Some(F17::new(9)));
        assert_eq!(F17::new(16).inverse(), Some(F17::new(16)));
        assert_eq!(F17::ZERO.inverse(), None);
        for a in F17::elements().skip(1) {
            assert_eq!(a * a.inverse().unwrap(), F17::ONE);
            assert_eq!(a + (-a), F17::ZERO);
        }
    }

    #[test]
    fn f17_root_has_order_16() {
        let g = F17::two_adic_root_of_unity();
        let mut x = g;
        for _ in 1..16 {
            assert_ne!(x, F17::ONE);
            x *= g;
        }
        assert_eq!(x, F17::ONE);
    }

    #[test]
    fn pallas_inverse_and_encoding() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        assert_eq!(Fq::ONE.inverse(), Some(Fq::ONE));
        assert_eq!(Fq::ZERO.inverse(), None);
        for _ in 0..50 {
            let a = Fq::random(&mut rng);
            if let Some(inv) = a.inverse() {
                assert_eq!(a * inv, Fq::ONE);
            }
            let bytes = a.to_le_bytes();
            assert_eq!(bytes.len(), 32);
            assert_eq!(Fq::from_le_bytes(&bytes), Some(a));
        }
        assert!(Fq::from_le_bytes(&[0xff; 32]).is_none());
        const { assert!(Fq::TWO_ADICITY >= 20) };
    }

    #[test]
    fn signed_conversions() {
        assert_eq!(Fq::from_i64(-3) + Fq::from_u64(3), Fq::ZERO);
        assert_eq!(F17::from_i64(-1), F17::new(16));
        let big: i128 = -(1i128 << 100) + 12345;
        let expect = -(Fq::from_u64(1 << 50).square()) + Fq::from_u64(12345);
        assert_eq!(Fq::from_i128(big), expect);
    }

    #[test]
    fn batch_invert_skips_zero() {
        let mut v = vec![F17::new(2), F17::ZERO, F17::new(16), F17::new(5)];
        batch_invert(&mut v);
        assert_eq!(v, vec![F17::new(9), F17::ZERO, F17::new(16), F17::new(7)]);
    }
}
