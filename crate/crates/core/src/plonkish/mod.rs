//! Plonkish circuits: a grid of fixed, advice and instance columns,
//! custom gates over rotated column queries and challenges, and copy
//! constraints, with a direct-evaluation satisfiability check.

mod assignment;
mod circuit;
mod commit_index;
mod expression;
pub mod permutation;

pub use assignment::{
    check_satisfiability, debug_grid, display_scalar, find_violation, pad_instance,
    pad_instance_shape, Assignment,
    Violation,
};
pub use circuit::{
    CircuitBuilder, CircuitIndex, ConstraintSystem, Gate, BLINDING_RESERVE, MIN_LOG_SIZE,
};
pub use commit_index::CommitIndexSet;
pub use expression::{Cell, Column, ColumnKind, Expression, Rotation};
