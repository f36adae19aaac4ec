//! Plonk-style encoding of copy constraints.
//!
//! Cell `(i, j)` of the `i`-th permutation column gets the label `δ^i·ω^j`
//! with `δ` a multiplicative generator, so labels from different columns
//! lie in different cosets of the domain. The σ columns hold, for each cell,
//! the label of the next cell on its cycle.

use crate::algebra::{powers, PrimeField};

use super::circuit::CircuitIndex;
use super::expression::Cell;

/// Coset shift of permutation column `i`: `δ^i`.
pub fn delta_powers<F: PrimeField>(count: usize) -> Vec<F> {
    powers(F::multiplicative_generator(), count)
}

/// Identity labels `δ^i·ω^j` for every permutation column, as Lagrange
/// vectors.
pub fn identity_labels<F: PrimeField>(index: &CircuitIndex<F>) -> Vec<Vec<F>> {
    let omega_powers = index.domain().elements();
    delta_powers::<F>(index.cs().permutation_columns.len())
        .into_iter()
        .map(|d| omega_powers.iter().map(|w| d * *w).collect())
        .collect()
}

/// σ columns as Lagrange vectors: each cycle's cells are rotated by one.
pub fn sigma_lagrange<F: PrimeField>(index: &CircuitIndex<F>) -> Vec<Vec<F>> {
    let ids = identity_labels(index);
    let mut sigma = ids.clone();
    let pos = |cell: &Cell| {
        index
            .cs()
            .permutation_position(cell.column)
            .expect("copied columns have equality enabled")
    };
    for cycle in index.cycles() {
        for (i, cell) in cycle.iter().enumerate() {
            let next = cycle[(i + 1) % cycle.len()];
            sigma[pos(cell)][cell.row] = ids[pos(&next)][next.row];
        }
    }
    sigma
}
