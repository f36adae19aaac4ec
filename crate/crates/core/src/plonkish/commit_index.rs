use std::collections::HashSet;

use crate::algebra::PrimeField;
use crate::error::{Error, Result};

use super::circuit::CircuitIndex;
use super::expression::{Cell, ColumnKind};

/// The witness cells bound to external commitments: list `k` names, in
/// order, the cells holding the coefficients of the `k`-th committed
/// polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommitIndexSet {
    lists: Vec<Vec<Cell>>,
}

impl CommitIndexSet {
    pub fn new(lists: Vec<Vec<Cell>>) -> Self {
        CommitIndexSet { lists }
    }

    /// Number of committed polynomials, `ℓ`.
    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn lists(&self) -> &[Vec<Cell>] {
        &self.lists
    }

    /// Coefficient count of each committed polynomial.
    pub fn sizes(&self) -> Vec<usize> {
        self.lists.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    /// Cells must be advice cells in usable rows, distinct within a list.
    pub fn validate<F: PrimeField>(&self, index: &CircuitIndex<F>) -> Result<()> {
        for (k, list) in self.lists.iter().enumerate() {
            let mut seen = HashSet::new();
            for cell in list {
                if cell.column.kind != ColumnKind::Advice || cell.column.index >= index.cs().num_advice() {
                    return Err(Error::LayoutMismatch(format!("commitment {k} names non-advice cell {cell}")));
                }
                if cell.row >= index.usable_rows() {
                    return Err(Error::RowOutOfRange {
                        cell: cell.to_string(),
                        usable: index.usable_rows(),
                    });
                }
                if !seen.insert(*cell) {
                    return Err(Error::LayoutMismatch(format!("commitment {k} lists {cell} twice")));
                }
            }
        }
        Ok(())
    }

    /// Reads each committed polynomial's coefficients out of an advice grid.
    pub fn values<F: PrimeField>(&self, advice: &[Vec<F>]) -> Vec<Vec<F>> {
        self.lists
            .iter()
            .map(|l| l.iter().map(|c| advice[c.column.index][c.row]).collect())
            .collect()
    }
}
