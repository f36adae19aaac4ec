//! Prime-field arithmetic, evaluation domains, dense polynomials and the
//! Lagrange-tail blinding used for zero knowledge.

mod domain;
mod field;
mod poly;

pub use domain::{powers, EvaluationDomain};
pub use field::{batch_invert, PrimeField, F17};
pub use poly::{
    divide_by_vanishing, divide_by_vanishing_with_remainder, horner_eval, poly_divide_linear,
    Basis, Coeff, ExtendedLagrangeCoeff, LagrangeCoeff, Polynomial,
};

use rand::RngCore;

use crate::error::{Error, Result};

/// Replaces rows `[used_rows, used_rows + num_blinders)` of a Lagrange
/// column with fresh random elements and zeroes every row after them.
pub fn blind_lagrange<F: PrimeField, R: RngCore + ?Sized>(
    column: &[F],
    used_rows: usize,
    num_blinders: usize,
    rng: &mut R,
) -> Result<Vec<F>> {
    let size = column.len();
    if used_rows + num_blinders > size {
        return Err(Error::NotEnoughBlindingRoom {
            used: used_rows,
            blinders: num_blinders,
            size,
        });
    }
    let mut out = column.to_vec();
    for (row, cell) in out.iter_mut().enumerate().skip(used_rows) {
        *cell = if row < used_rows + num_blinders {
            F::random(rng)
        } else {
            F::ZERO
        };
    }
    Ok(out)
}
