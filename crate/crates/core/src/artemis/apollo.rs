//! Alignment transform used by Lagrange-basis linking schemes: each
//! committed list is copied, in order, into a dedicated advice column so
//! that the column's evaluations on the first `d` domain points are the
//! committed values. No linking proof is produced here.

use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::plonkish::{Assignment, CircuitBuilder, CircuitIndex, Column, CommitIndexSet};

/// Adds one aligned column per committed list, copy-constrained cell by
/// cell to the originals. Returns the aligned columns in list order.
pub fn apollo_align_transform<F: PrimeField>(
    circuit: &CircuitIndex<F>,
    icom: &CommitIndexSet,
) -> Result<(CircuitIndex<F>, Vec<Column>)> {
    let usable = circuit.usable_rows();
    if let Some(&len) = icom.sizes().iter().find(|&&d| d > usable) {
        return Err(Error::WitnessTooLargeForColumn { len, usable });
    }
    icom.validate(circuit)?;
    let phase = circuit.cs().num_phases().saturating_sub(1);
    let mut b = CircuitBuilder::from_index(circuit);
    let mut aligned = Vec::with_capacity(icom.len());
    for list in icom.lists() {
        let col = b.advice_column(phase);
        for (row, cell) in list.iter().enumerate() {
            b.copy(*cell, col.at(row));
        }
        aligned.push(col);
    }
    Ok((b.build()?, aligned))
}

/// Fills the aligned columns from the committed cells.
pub fn apollo_witness_transform<F: PrimeField>(
    assignment: &Assignment<F>,
    index: &CircuitIndex<F>,
    icom: &CommitIndexSet,
    aligned: &[Column],
) -> Result<Assignment<F>> {
    if aligned.len() != icom.len() {
        return Err(Error::LayoutMismatch(format!(
            "{} aligned columns for {} lists",
            aligned.len(),
            icom.len()
        )));
    }
    let mut out = assignment.clone();
    out.extend_to(index);
    for (col, values) in aligned.iter().zip(icom.values(&assignment.advice)) {
        for (row, v) in values.into_iter().enumerate() {
            out.set(col.at(row), v);
        }
    }
    Ok(out)
}
