use super::group::PrimeGroup;
use crate::algebra::PrimeField;

fn window_size(n: usize) -> usize {
    if n < 32 {
        3
    } else {
        ((n as f64).ln().ceil() as usize).clamp(4, 16)
    }
}

/// Reads `width` bits starting at bit `offset` of a little-endian encoding.
fn window(bytes: &[u8], offset: usize, width: usize) -> usize {
    let mut out = 0usize;
    for bit in 0..width {
        let pos = offset + bit;
        let byte = pos / 8;
        if byte >= bytes.len() {
            break;
        }
        out |= (((bytes[byte] >> (pos % 8)) & 1) as usize) << bit;
    }
    out
}

/// Bucket-method multi-scalar multiplication.
///
/// Extra bases or scalars beyond the shorter slice are ignored.
pub fn pippenger<G: PrimeGroup>(bases: &[G], scalars: &[G::Scalar]) -> G {
    pippenger_with(bases, scalars)
}

/// [`pippenger`] over bases in any representation the group can add,
/// e.g. affine points with cheaper mixed addition.
pub fn pippenger_with<G, B>(bases: &[B], scalars: &[G::Scalar]) -> G
where
    G: PrimeGroup + std::ops::AddAssign<B>,
    B: Copy,
{
    let n = bases.len().min(scalars.len());
    if n == 0 {
        return G::identity();
    }
    let encoded: Vec<Vec<u8>> = scalars[..n].iter().map(|s| s.to_le_bytes()).collect();
    let c = window_size(n);
    let num_bits = G::Scalar::NUM_BITS as usize;
    let num_windows = num_bits.div_ceil(c);

    let mut acc = G::identity();
    for w in (0..num_windows).rev() {
        for _ in 0..c {
            acc = acc.double();
        }
        let mut buckets = vec![G::identity(); (1 << c) - 1];
        for (base, bytes) in bases[..n].iter().zip(&encoded) {
            let idx = window(bytes, w * c, c);
            if idx != 0 {
                buckets[idx - 1] += *base;
            }
        }
        // Σ_i (i+1)·bucket_i via running sums.
        let mut running = G::identity();
        let mut window_sum = G::identity();
        for b in buckets.into_iter().rev() {
            running += b;
            window_sum += running;
        }
        acc += window_sum;
    }
    acc
}

/// `scalar·p` for every `p`, sharing one 4-bit window decomposition of
/// the scalar across all points.
pub fn scale_all<G: PrimeGroup>(points: &[G], scalar: G::Scalar) -> Vec<G> {
    const W: usize = 4;
    let bytes = scalar.to_le_bytes();
    let mut digits: Vec<usize> = (0..(G::Scalar::NUM_BITS as usize).div_ceil(W))
        .map(|i| window(&bytes, i * W, W))
        .collect();
    // Short scalars skip their leading zero windows.
    while digits.last() == Some(&0) {
        digits.pop();
    }
    points
        .iter()
        .map(|p| {
            let mut table = [G::identity(); 1 << W];
            for i in 1..table.len() {
                table[i] = table[i - 1] + *p;
            }
            let mut acc = G::identity();
            for &d in digits.iter().rev() {
                for _ in 0..W {
                    acc = acc.double();
                }
                if d != 0 {
                    acc += table[d];
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commit::SchnorrGroup17;
    use crate::algebra::F17;
    use pasta_curves::pallas;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn naive<G: PrimeGroup>(bases: &[G], scalars: &[G::Scalar]) -> G {
        bases.iter().zip(scalars).map(|(b, s)| *b * *s).sum()
    }

    #[test]
    fn pippenger_matches_naive_pallas() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for n in [0usize, 1, 2, 7, 33, 100] {
            let bases: Vec<pallas::Point> = (0..n)
                .map(|i| pallas::Point::hash_to_group("msm-test", &(i as u64).to_le_bytes()))
                .collect();
            let scalars: Vec<pallas::Scalar> =
                (0..n).map(|_| pallas::Scalar::random(&mut rng)).collect();
            assert_eq!(pippenger(&bases, &scalars), naive(&bases, &scalars));
        }
    }

    #[test]
    fn scale_all_matches_scalar_mul() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let points: Vec<pallas::Point> = (0..5u8).map(|i| pallas::Point::hash_to_group("scale", &[i])).collect();
        for s in [pallas::Scalar::ZERO, pallas::Scalar::ONE, pallas::Scalar::random(&mut rng)] {
            let want: Vec<_> = points.iter().map(|p| *p * s).collect();
            assert_eq!(scale_all(&points, s), want);
        }
    }

    #[test]
    fn pippenger_matches_naive_schnorr() {
        let bases: Vec<SchnorrGroup17> = (0..40u8)
            .map(|i| SchnorrGroup17::hash_to_group("msm", &[i]))
            .collect();
        let scalars: Vec<F17> = (0..40u8).map(|i| F17::new(i % 17)).collect();
        assert_eq!(pippenger(&bases, &scalars), naive(&bases, &scalars));
    }
}
