//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use artemis_core::algebra::PrimeField;
use artemis_core::plonkish::{Assignment, CircuitBuilder, CircuitIndex, Column, CommitIndexSet};
use artemis_core::Scalar;
use rand::seq::SliceRandom;
use rand::RngCore;

/// A circuit squaring each committed weight: list `i` lives in column
/// `w_i` (rows `0..d_i`) with `s_i = w_i²`. The committed order of cells is
/// optionally shuffled so lists do not follow row order.
pub struct WeightCircuit {
    pub index: CircuitIndex<Scalar>,
    pub icom: CommitIndexSet,
    pub columns: Vec<(Column, Column)>,
}

impl WeightCircuit {
    pub fn new<R: RngCore>(k: u32, sizes: &[usize], shuffle: bool, rng: &mut R) -> Self {
        let mut b = CircuitBuilder::<Scalar>::new(k).unwrap();
        let mut columns = Vec::new();
        let mut lists = Vec::new();
        for &d in sizes {
            let w = b.advice_column(0);
            let s = b.advice_column(0);
            let q = b.fixed_column();
            b.gate("square", q.cur() * (w.cur() * w.cur() - s.cur()));
            for row in 0..d {
                b.set_fixed(q, row, Scalar::ONE);
            }
            let mut cells: Vec<_> = (0..d).map(|r| w.at(r)).collect();
            if shuffle {
                cells.shuffle(rng);
            }
            lists.push(cells);
            columns.push((w, s));
        }
        WeightCircuit {
            index: b.build().unwrap(),
            icom: CommitIndexSet::new(lists),
            columns,
        }
    }

    /// An honest assignment whose committed lists read back as `weights`.
    pub fn assign(&self, weights: &[Vec<Scalar>]) -> Assignment<Scalar> {
        let mut a = Assignment::new(&self.index);
        for ((list, (_, s)), ws) in self.icom.lists().iter().zip(&self.columns).zip(weights) {
            for (cell, v) in list.iter().zip(ws) {
                a.set(*cell, *v);
                a.set(s.at(cell.row), v.square());
            }
        }
        a
    }
}

pub fn random_vec<R: RngCore>(rng: &mut R, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| Scalar::random(&mut *rng)).collect()
}

/// `μ + Σ α^{i+1}·w_i` coefficient by coefficient, evaluated as a plain
/// power sum at `β`.
pub fn aggregate_eval(mu: Scalar, weights: &[Vec<Scalar>], alpha: Scalar, beta: Scalar) -> Scalar {
    let len = weights.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let mut coeffs = vec![Scalar::ZERO; len];
    coeffs[0] = mu;
    let mut a = alpha;
    for w in weights {
        for (c, v) in coeffs.iter_mut().zip(w) {
            *c += a * *v;
        }
        a *= alpha;
    }
    let mut acc = Scalar::ZERO;
    let mut power = Scalar::ONE;
    for c in coeffs {
        acc += c * power;
        power *= beta;
    }
    acc
}

/// Smallest `k ≥ 3` whose usable rows fit `rows`.
pub fn k_for_rows(rows: usize) -> u32 {
    let mut k = 3;
    while (1usize << k) < rows + 6 {
        k += 1;
    }
    k
}
