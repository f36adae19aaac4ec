//! The aggregated constraint shared by prover and verifier, and the fixed
//! order in which polynomials are opened.

use crate::algebra::PrimeField;
use crate::plonkish::{Column, ConstraintSystem, Rotation};

/// A polynomial the verifier can query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Oracle {
    Column(Column),
    Sigma(usize),
    Z(usize),
    /// Quotient chunks folded as `Σ x^{c·n} t_c`.
    Quotient,
}

/// Where an oracle is opened, relative to the evaluation point `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueryPoint {
    /// `ω^r·x`.
    Rot(i32),
    /// `ω^u·x` with `u` the number of usable rows.
    LastRow,
}

impl QueryPoint {
    pub(crate) fn id(self) -> u8 {
        match self {
            QueryPoint::Rot(r) => (r + 1) as u8,
            QueryPoint::LastRow => 3,
        }
    }

    pub(crate) fn from_id(id: u8) -> Option<Self> {
        match id {
            0..=2 => Some(QueryPoint::Rot(id as i32 - 1)),
            3 => Some(QueryPoint::LastRow),
            _ => None,
        }
    }
}

/// Every (oracle, point) pair the proof carries an evaluation for, in
/// transcript order. The quotient is excluded: its value is derived.
pub fn query_layout<F: PrimeField>(cs: &ConstraintSystem<F>) -> Vec<(Oracle, QueryPoint)> {
    let mut out = Vec::new();
    let mut column_queries = |col: Column| {
        for r in cs.rotations(col) {
            out.push((Oracle::Column(col), QueryPoint::Rot(r.0)));
        }
    };
    for i in 0..cs.num_advice() {
        column_queries(Column::advice(i));
    }
    for i in 0..cs.num_fixed {
        column_queries(Column::fixed(i));
    }
    for i in 0..cs.permutation_columns.len() {
        out.push((Oracle::Sigma(i), QueryPoint::Rot(0)));
    }
    let chunks = cs.num_permutation_chunks();
    for c in 0..chunks {
        out.push((Oracle::Z(c), QueryPoint::Rot(0)));
        out.push((Oracle::Z(c), QueryPoint::Rot(1)));
        if c + 1 < chunks {
            out.push((Oracle::Z(c), QueryPoint::LastRow));
        }
    }
    out
}

/// Challenges and selector values the aggregate needs at one point.
pub struct AggregateInputs<'a, F> {
    pub challenges: &'a [F],
    pub beta: F,
    pub gamma: F,
    pub y: F,
    /// The evaluation point itself (the `X` in `δ^i·X`).
    pub x: F,
    pub l0: F,
    pub l_last: F,
    pub l_active: F,
    /// `δ^i` for each permutation column.
    pub deltas: &'a [F],
}

/// `Σ y^t·c_t` over: gates (restricted to usable rows), the permutation
/// start/end/chaining constraints, and the per-chunk product rule.
pub fn aggregate<F: PrimeField>(
    cs: &ConstraintSystem<F>,
    inputs: &AggregateInputs<'_, F>,
    value: &impl Fn(Oracle, QueryPoint) -> F,
) -> F {
    let mut acc = F::ZERO;
    let mut push = |term: F| {
        acc = acc * inputs.y + term;
    };

    for gate in &cs.gates {
        let v = gate.expr.evaluate_scalar(
            &|c: Column, r: Rotation| value(Oracle::Column(c), QueryPoint::Rot(r.0)),
            inputs.challenges,
        );
        push(inputs.l_active * v);
    }

    let chunks = cs.num_permutation_chunks();
    if chunks == 0 {
        return acc;
    }
    let z = |c: usize, p: QueryPoint| value(Oracle::Z(c), p);
    push(inputs.l0 * (F::ONE - z(0, QueryPoint::Rot(0))));
    push(inputs.l_last * (z(chunks - 1, QueryPoint::Rot(0)) - F::ONE));
    for c in 1..chunks {
        push(inputs.l0 * (z(c, QueryPoint::Rot(0)) - z(c - 1, QueryPoint::LastRow)));
    }
    let chunk_len = cs.permutation_chunk_len();
    for c in 0..chunks {
        let mut left = z(c, QueryPoint::Rot(1));
        let mut right = z(c, QueryPoint::Rot(0));
        let start = c * chunk_len;
        let end = (start + chunk_len).min(cs.permutation_columns.len());
        for i in start..end {
            let col = cs.permutation_columns[i];
            let v = value(Oracle::Column(col), QueryPoint::Rot(0));
            left *= v + inputs.beta * value(Oracle::Sigma(i), QueryPoint::Rot(0)) + inputs.gamma;
            right *= v + inputs.beta * inputs.deltas[i] * inputs.x + inputs.gamma;
        }
        push(inputs.l_active * (left - right));
    }
    acc
}
