use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use group::{Curve, GroupEncoding};
use pasta_curves::arithmetic::CurveExt;
use pasta_curves::glv;
use pasta_curves::pallas;
use sha2::{Digest, Sha256};

use crate::algebra::{PrimeField, F17};

/// A prime-order group, written additively, whose order is the modulus of
/// `Scalar`.
pub trait PrimeGroup:
    Copy
    + Debug
    + Eq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + Mul<Self::Scalar, Output = Self>
    + Sum
{
    type Scalar: PrimeField;

    /// Bytes in the compressed canonical encoding.
    const ENCODED_LEN: usize;

    fn identity() -> Self;

    fn generator() -> Self;

    fn is_identity(&self) -> bool;

    fn double(&self) -> Self {
        *self + *self
    }

    /// Deterministic map from bytes to a group element with unknown
    /// discrete log relative to every other output.
    fn hash_to_group(domain: &str, message: &[u8]) -> Self;

    fn to_bytes(&self) -> Vec<u8>;

    fn from_bytes(bytes: &[u8]) -> Option<Self>;

    /// `Σ scalars[i]·bases[i]`.
    fn msm(bases: &[Self], scalars: &[Self::Scalar]) -> Self {
        super::msm::pippenger(bases, scalars)
    }

    /// `scalar·p` for every `p`.
    fn scale_all(points: &[Self], scalar: Self::Scalar) -> Vec<Self> {
        super::msm::scale_all(points, scalar)
    }
}

impl PrimeGroup for pallas::Point {
    type Scalar = pallas::Scalar;
    const ENCODED_LEN: usize = 32;

    fn identity() -> Self {
        <pallas::Point as group::Group>::identity()
    }

    fn generator() -> Self {
        <pallas::Point as group::Group>::generator()
    }

    fn is_identity(&self) -> bool {
        bool::from(group::Group::is_identity(self))
    }

    fn double(&self) -> Self {
        group::Group::double(self)
    }

    fn hash_to_group(domain: &str, message: &[u8]) -> Self {
        pallas::Point::hash_to_curve(domain)(message)
    }

    fn msm(bases: &[Self], scalars: &[Self::Scalar]) -> Self {
        let n = bases.len().min(scalars.len());
        let mut affine = vec![pallas::Affine::default(); n];
        pallas::Point::batch_normalize(&bases[..n], &mut affine);
        super::msm::pippenger_with(&affine, &scalars[..n])
    }

    fn scale_all(points: &[Self], scalar: Self::Scalar) -> Vec<Self> {
        let k = glv::Decomposed::new(&scalar);
        glv::Table::batch(points).iter().map(|t| t.mul_decomposed(&k)).collect()
    }

    fn to_bytes(&self) -> Vec<u8> {
        GroupEncoding::to_bytes(&self.to_affine()).to_vec()
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let repr: [u8; 32] = bytes.try_into().ok()?;
        let affine: Option<pallas::Affine> =
            Option::from(<pallas::Affine as GroupEncoding>::from_bytes(&repr));
        affine.map(pallas::Point::from)
    }
}

const SCHNORR_MODULUS: u32 = 103;
const SCHNORR_COFACTOR: u32 = 6;

fn mod_pow(mut base: u32, mut exp: u32) -> u32 {
    let mut acc = 1u32;
    base %= SCHNORR_MODULUS;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % SCHNORR_MODULUS;
        }
        base = base * base % SCHNORR_MODULUS;
        exp >>= 1;
    }
    acc
}

/// The order-17 subgroup of `(Z/103Z)^*`, written additively.
///
/// Its scalar field is [`F17`]. Discrete logs are trivially computable, so
/// this group is only for fast structural tests of the commitment code.
/// Not cryptographic.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchnorrGroup17(u32);

impl SchnorrGroup17 {
    /// The underlying residue modulo 103.
    pub fn residue(&self) -> u32 {
        self.0
    }
}

impl Debug for SchnorrGroup17 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Schnorr17({})", self.0)
    }
}

impl Add for SchnorrGroup17 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        SchnorrGroup17(self.0 * rhs.0 % SCHNORR_MODULUS)
    }
}

impl Neg for SchnorrGroup17 {
    type Output = Self;
    fn neg(self) -> Self {
        // inverse in the subgroup: x^(17-1)
        SchnorrGroup17(mod_pow(self.0, 16))
    }
}

impl Sub for SchnorrGroup17 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl AddAssign for SchnorrGroup17 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for SchnorrGroup17 {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Mul<F17> for SchnorrGroup17 {
    type Output = Self;
    fn mul(self, rhs: F17) -> Self {
        SchnorrGroup17(mod_pow(self.0, rhs.value() as u32))
    }
}

impl Sum for SchnorrGroup17 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(SchnorrGroup17(1), |a, b| a + b)
    }
}

impl PrimeGroup for SchnorrGroup17 {
    type Scalar = F17;
    const ENCODED_LEN: usize = 1;

    fn identity() -> Self {
        SchnorrGroup17(1)
    }

    fn generator() -> Self {
        // 2^6 mod 103
        SchnorrGroup17(64)
    }

    fn is_identity(&self) -> bool {
        self.0 == 1
    }

    fn hash_to_group(domain: &str, message: &[u8]) -> Self {
        for counter in 0u32.. {
            let digest = Sha256::new()
                .chain_update(domain.as_bytes())
                .chain_update([0u8])
                .chain_update(message)
                .chain_update(counter.to_le_bytes())
                .finalize();
            let x = u32::from_le_bytes(digest[..4].try_into().unwrap()) % SCHNORR_MODULUS;
            if x == 0 {
                continue;
            }
            let y = mod_pow(x, SCHNORR_COFACTOR);
            if y != 1 {
                return SchnorrGroup17(y);
            }
        }
        unreachable!()
    }

    fn to_bytes(&self) -> Vec<u8> {
        vec![self.0 as u8]
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        match bytes {
            [b] if (*b as u32) < SCHNORR_MODULUS && *b != 0 && mod_pow(*b as u32, 17) == 1 => {
                Some(SchnorrGroup17(*b as u32))
            }
            _ => None,
        }
    }

    fn msm(bases: &[Self], scalars: &[F17]) -> Self {
        bases.iter().zip(scalars).map(|(b, s)| *b * *s).sum()
    }
}
