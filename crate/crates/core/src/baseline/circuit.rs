use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::plonkish::{Assignment, CircuitBuilder, CircuitIndex, Column, CommitIndexSet, Expression};

use super::sponge::{pad, SpongeParams, RATE, WIDTH};

/// Rows one absorbed chunk occupies: the absorbed state, then one row per
/// round, the last holding the permutation output.
pub const ROWS_PER_CHUNK: usize = 1 + super::FULL_ROUNDS + super::PARTIAL_ROUNDS;

/// Where the hash transform put its columns and rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashLayout<F> {
    pub icom: CommitIndexSet,
    pub params: SpongeParams<F>,
    pub state: [Column; WIDTH],
    pub inputs: [Column; RATE],
    /// Instance column receiving digest `i` at row `i`.
    pub instance: Column,
    /// First row of each list's hash.
    pub starts: Vec<usize>,
    /// Rows whose first state cell holds each digest.
    pub digest_rows: Vec<usize>,
    /// Active rows used by all hashes together.
    pub rows: usize,
}

impl<F: PrimeField> HashLayout<F> {
    /// Appends the digest column to a base instance.
    pub fn extend_instance(&self, instance: &[Vec<F>], digests: &[F]) -> Vec<Vec<F>> {
        let mut out = instance.to_vec();
        out.push(digests.to_vec());
        out
    }
}

fn chunks(len: usize) -> usize {
    (len + 1).div_ceil(RATE)
}

fn pow5<F: PrimeField>(e: Expression<F>) -> Expression<F> {
    let sq = e.clone() * e.clone();
    sq.clone() * sq * e
}

/// Adds a sponge computation over each committed list, with inputs
/// copy-constrained to the listed cells and each digest copy-constrained to
/// a new instance column.
pub fn hash_index_transform<F: PrimeField>(
    circuit: &CircuitIndex<F>,
    icom: &CommitIndexSet,
    params: &SpongeParams<F>,
) -> Result<(CircuitIndex<F>, HashLayout<F>)> {
    icom.validate(circuit)?;
    let rows: usize = icom.sizes().into_iter().map(|d| chunks(d) * ROWS_PER_CHUNK).sum();
    if rows > circuit.usable_rows() || icom.len() > circuit.usable_rows() {
        return Err(Error::NoRoomForHashRows {
            needed: rows,
            available: circuit.usable_rows(),
        });
    }
    let phase = circuit.cs().num_phases().saturating_sub(1);
    let mut b = CircuitBuilder::from_index(circuit);
    let state: [Column; WIDTH] = std::array::from_fn(|_| b.advice_column(phase));
    let inputs: [Column; RATE] = std::array::from_fn(|_| b.advice_column(phase));
    let rc: [Column; WIDTH] = std::array::from_fn(|_| b.fixed_column());
    let q_in: [Column; RATE] = std::array::from_fn(|_| b.fixed_column());
    let pad_col: [Column; RATE] = std::array::from_fn(|_| b.fixed_column());
    let q_full = b.fixed_column();
    let q_part = b.fixed_column();
    let q_init = b.fixed_column();
    let q_abs = b.fixed_column();
    let instance = b.instance_column();

    // Round transitions.
    let sboxed = |j: usize, full: bool| {
        let e = state[j].cur() + rc[j].cur();
        if full || j == 0 {
            pow5(e)
        } else {
            e
        }
    };
    for (full, q, name) in [(true, q_full, "full-round"), (false, q_part, "partial-round")] {
        for (i, row) in params.mds.iter().enumerate() {
            let mut mixed = Expression::constant(F::ZERO);
            for (j, m) in row.iter().enumerate() {
                mixed = mixed + sboxed(j, full) * *m;
            }
            b.gate(format!("{name}-{i}"), q.cur() * (state[i].next() - mixed));
        }
    }
    // Absorption: a real input is gated by `q_in`, padding comes from a
    // fixed column.
    let absorbed = |j: usize| q_in[j].cur() * inputs[j].cur() + pad_col[j].cur();
    for j in 0..WIDTH {
        let add = if j < RATE { absorbed(j) } else { Expression::constant(F::ZERO) };
        b.gate(format!("absorb-first-{j}"), q_init.cur() * (state[j].cur() - add.clone()));
        b.gate(format!("absorb-{j}"), q_abs.cur() * (state[j].cur() - state[j].prev() - add));
    }

    let mut starts = Vec::with_capacity(icom.len());
    let mut digest_rows = Vec::with_capacity(icom.len());
    let mut row = 0;
    for (i, list) in icom.lists().iter().enumerate() {
        starts.push(row);
        let padded = pad(&vec![F::ZERO; list.len()]);
        for (c, chunk) in padded.chunks(RATE).enumerate() {
            let a = row + c * ROWS_PER_CHUNK;
            b.set_fixed(if c == 0 { q_init } else { q_abs }, a, F::ONE);
            for j in 0..RATE {
                let slot = c * RATE + j;
                if slot < list.len() {
                    b.set_fixed(q_in[j], a, F::ONE);
                    b.copy(list[slot], inputs[j].at(a));
                } else {
                    b.set_fixed(pad_col[j], a, chunk[j]);
                }
            }
            for r in 0..params.rounds() {
                let q = if SpongeParams::<F>::is_full_round(r) { q_full } else { q_part };
                b.set_fixed(q, a + r, F::ONE);
                for j in 0..WIDTH {
                    b.set_fixed(rc[j], a + r, params.round_constants[r][j]);
                }
            }
        }
        row += chunks(list.len()) * ROWS_PER_CHUNK;
        digest_rows.push(row - 1);
        b.copy(state[0].at(row - 1), instance.at(i));
    }

    let index = b.build()?;
    Ok((
        index,
        HashLayout {
            icom: icom.clone(),
            params: params.clone(),
            state,
            inputs,
            instance,
            starts,
            digest_rows,
            rows,
        },
    ))
}

/// Fills the sponge columns and returns the digests, in list order.
pub fn hash_witness_transform<F: PrimeField>(
    assignment: &Assignment<F>,
    index: &CircuitIndex<F>,
    layout: &HashLayout<F>,
) -> Result<(Assignment<F>, Vec<F>)> {
    if assignment.advice.len() != layout.state[0].index {
        return Err(Error::LayoutMismatch(format!(
            "assignment has {} advice columns, the untransformed circuit {}",
            assignment.advice.len(),
            layout.state[0].index
        )));
    }
    let mut out = assignment.clone();
    out.extend_to(index);
    let mut digests = Vec::with_capacity(layout.icom.len());
    for (values, &start) in layout.icom.values(&assignment.advice).iter().zip(&layout.starts) {
        let mut state = [F::ZERO; WIDTH];
        for (c, chunk) in pad(values).chunks(RATE).enumerate() {
            let a = start + c * ROWS_PER_CHUNK;
            for j in 0..RATE {
                state[j] += chunk[j];
                if c * RATE + j < values.len() {
                    out.set(layout.inputs[j].at(a), chunk[j]);
                }
            }
            let trace = layout.params.trace(state);
            for (r, s) in trace.iter().enumerate() {
                for j in 0..WIDTH {
                    out.set(layout.state[j].at(a + r), s[j]);
                }
            }
            state = *trace.last().expect("non-empty");
        }
        digests.push(state[0]);
    }
    Ok((out, digests))
}
