//! Circuit transforms that evaluate the aggregated committed polynomial
//! `𝛍 + Σ α^i·𝐰_i` at `β` inside the circuit.
//!
//! Coefficient `t` of commitment `i` is copied to row `t / m` of that
//! commitment's `(t mod m)`-th witness column, so each active row carries
//! `m` consecutive coefficients. Two gadgets consume the copies:
//!
//! * Horner: a result column with
//!   `ρ_r = μ_r + Σ_j agg_j[r]·β^j + ρ_{r+1}·β^m` and `ρ_{n_horner} = 0`,
//!   so `ρ_0` is the evaluation.
//! * Strawman: explicit power columns `p_j[r] = β^{r·m+j}` and a running sum
//!   `s_r = s_{r+1} + μ_r + Σ_j agg_j[r]·p_j[r]`.
//!
//! Here `agg_j[r] = Σ_i α^{i+1}·w_{i,j}[r]`; the masking value `μ` sits at
//! row 0 of its own column and takes the `α^0` slot.

use crate::algebra::PrimeField;
use crate::error::{Error, Result};
use crate::plonkish::{
    Assignment, Cell, CircuitBuilder, CircuitIndex, Column, CommitIndexSet, Expression,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gadget {
    Horner,
    Strawman {
        /// `p_j` for `j < m`, all in the result phase.
        powers: Vec<Column>,
        /// Selector for `p_0 = 1` at row 0.
        first: Column,
        /// Selector for `p_0[r+1] = β·p_{m−1}[r]`.
        chain: Column,
    },
}

/// Where a link transform put its columns and challenges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornerLayout {
    pub icom: CommitIndexSet,
    /// Witness columns per commitment row.
    pub m: usize,
    pub n_horner: usize,
    /// `witness_columns[i][j]`: the `j`-th copy column of commitment `i`.
    pub witness_columns: Vec<Vec<Column>>,
    pub mu: Column,
    /// Result column; its value at row 0 is `ρ`.
    pub rho: Column,
    pub selector: Column,
    pub boundary: Column,
    pub alpha: usize,
    pub beta: usize,
    pub copy_phase: u8,
    pub rho_phase: u8,
    pub gadget: Gadget,
}

impl HornerLayout {
    pub fn ell(&self) -> usize {
        self.icom.len()
    }

    /// Row of the result column holding `ρ`; opened at `ω^row`.
    pub fn h_omega_row(&self) -> usize {
        0
    }

    /// Cell holding coefficient `t` of commitment `i`.
    pub fn coeff_cell(&self, i: usize, t: usize) -> Cell {
        self.witness_columns[i][t % self.m].at(t / self.m)
    }

    /// Columns the gadget adds for evaluation: copies, μ, result and (for
    /// the strawman) powers of β.
    pub fn evaluation_columns(&self) -> usize {
        let powers = match &self.gadget {
            Gadget::Horner => 0,
            Gadget::Strawman { powers, .. } => powers.len(),
        };
        self.witness_columns.iter().map(Vec::len).sum::<usize>() + 2 + powers
    }

    /// Evaluation-related columns per commitment row, ignoring μ: the
    /// quantity compared between gadgets for a single commitment.
    pub fn columns_per_commitment(&self) -> usize {
        match &self.gadget {
            Gadget::Horner => self.m + 2,
            Gadget::Strawman { powers, .. } => self.m + powers.len() + 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Horner,
    Strawman,
}

/// Adds the Horner gadget, choosing the fewest witness columns per
/// commitment that fit the usable rows.
pub fn horner_index_transform<F: PrimeField>(
    circuit: &CircuitIndex<F>,
    icom: &CommitIndexSet,
) -> Result<(CircuitIndex<F>, HornerLayout)> {
    let m = min_columns(circuit, icom)?;
    link_transform(circuit, icom, m, Kind::Horner)
}

/// Horner gadget with exactly `m` witness columns per commitment.
pub fn horner_index_transform_with_columns<F: PrimeField>(
    circuit: &CircuitIndex<F>,
    icom: &CommitIndexSet,
    m: usize,
) -> Result<(CircuitIndex<F>, HornerLayout)> {
    link_transform(circuit, icom, m, Kind::Horner)
}

/// The inner-product strawman over the same row layout.
pub fn strawman_index_transform<F: PrimeField>(
    circuit: &CircuitIndex<F>,
    icom: &CommitIndexSet,
) -> Result<(CircuitIndex<F>, HornerLayout)> {
    let m = min_columns(circuit, icom)?;
    link_transform(circuit, icom, m, Kind::Strawman)
}

pub fn strawman_index_transform_with_columns<F: PrimeField>(
    circuit: &CircuitIndex<F>,
    icom: &CommitIndexSet,
    m: usize,
) -> Result<(CircuitIndex<F>, HornerLayout)> {
    link_transform(circuit, icom, m, Kind::Strawman)
}

/// Rows the gadget needs beyond the active ones: the zero boundary and ψ.
const EXTRA_ROWS: usize = 2;

fn min_columns<F: PrimeField>(circuit: &CircuitIndex<F>, icom: &CommitIndexSet) -> Result<usize> {
    let rows = circuit.usable_rows().saturating_sub(EXTRA_ROWS);
    let d = icom.sizes().into_iter().max().unwrap_or(0);
    if rows == 0 {
        return Err(Error::NoRoomForHornerRows {
            needed: 1 + EXTRA_ROWS,
            available: circuit.usable_rows(),
        });
    }
    Ok(d.div_ceil(rows).max(1))
}

fn link_transform<F: PrimeField>(
    circuit: &CircuitIndex<F>,
    icom: &CommitIndexSet,
    m: usize,
    kind: Kind,
) -> Result<(CircuitIndex<F>, HornerLayout)> {
    if icom.is_empty() {
        return Err(Error::LayoutMismatch("no committed witness lists".into()));
    }
    if m == 0 {
        return Err(Error::LayoutMismatch("at least one witness column per commitment".into()));
    }
    icom.validate(circuit)?;
    let n_horner = icom.sizes().into_iter().map(|d| d.div_ceil(m)).max().unwrap_or(0).max(1);
    if n_horner + EXTRA_ROWS > circuit.usable_rows() {
        return Err(Error::NoRoomForHornerRows {
            needed: n_horner + EXTRA_ROWS,
            available: circuit.usable_rows(),
        });
    }

    let base_phases = circuit.cs().num_phases();
    let copy_phase = base_phases - 1;
    let rho_phase = base_phases;
    let mut b = CircuitBuilder::from_index(circuit);

    let witness_columns: Vec<Vec<Column>> = (0..icom.len())
        .map(|_| (0..m).map(|_| b.advice_column(copy_phase)).collect())
        .collect();
    let mu = b.advice_column(copy_phase);
    let alpha = b.challenge(copy_phase);
    let beta = b.challenge(copy_phase);
    let rho = b.advice_column(rho_phase);
    let selector = b.fixed_column();
    let boundary = b.fixed_column();
    for r in 0..n_horner {
        b.set_fixed(selector, r, F::ONE);
    }
    b.set_fixed(boundary, n_horner, F::ONE);

    for (i, list) in icom.lists().iter().enumerate() {
        for (t, cell) in list.iter().enumerate() {
            b.copy(*cell, witness_columns[i][t % m].at(t / m));
        }
    }

    let alpha_e = || Expression::<F>::challenge(alpha);
    let beta_e = || Expression::<F>::challenge(beta);
    // agg_j = α·(w_0j + α·(w_1j + …)).
    let agg = |j: usize| {
        let mut acc: Option<Expression<F>> = None;
        for cols in witness_columns.iter().rev() {
            let w = cols[j].cur();
            acc = Some(match acc {
                None => w,
                Some(inner) => w + alpha_e() * inner,
            });
        }
        alpha_e() * acc.expect("at least one commitment")
    };

    let gadget = match kind {
        Kind::Horner => {
            // agg_0 + β·(agg_1 + β·(… + β·(agg_{m−1} + β·ρ_next))).
            let mut acc = rho.next();
            for j in (0..m).rev() {
                acc = agg(j) + beta_e() * acc;
            }
            b.gate("horner", selector.cur() * (mu.cur() + acc - rho.cur()));
            Gadget::Horner
        }
        Kind::Strawman => {
            let powers: Vec<Column> = (0..m).map(|_| b.advice_column(rho_phase)).collect();
            let first = b.fixed_column();
            let chain = b.fixed_column();
            b.set_fixed(first, 0, F::ONE);
            for r in 0..n_horner.saturating_sub(1) {
                b.set_fixed(chain, r, F::ONE);
            }
            b.gate("power-first", first.cur() * (powers[0].cur() - Expression::constant(F::ONE)));
            for j in 1..m {
                b.gate(
                    format!("power-{j}"),
                    selector.cur() * (powers[j].cur() - beta_e() * powers[j - 1].cur()),
                );
            }
            b.gate("power-chain", chain.cur() * (powers[0].next() - beta_e() * powers[m - 1].cur()));
            let mut sum = mu.cur() + rho.next();
            for (j, p) in powers.iter().enumerate() {
                sum = sum + agg(j) * p.cur();
            }
            b.gate("inner-product", selector.cur() * (sum - rho.cur()));
            Gadget::Strawman { powers, first, chain }
        }
    };
    b.gate("result-boundary", boundary.cur() * rho.cur());

    let index = b.build()?;
    Ok((
        index,
        HornerLayout {
            icom: icom.clone(),
            m,
            n_horner,
            witness_columns,
            mu,
            rho,
            selector,
            boundary,
            alpha,
            beta,
            copy_phase,
            rho_phase,
            gadget,
        },
    ))
}

/// Copies committed cells into the witness columns and places `μ`.
pub(crate) fn fill_copies<F: PrimeField>(layout: &HornerLayout, advice: &mut [Vec<F>], mu: F) {
    for (i, list) in layout.icom.lists().iter().enumerate() {
        for (t, cell) in list.iter().enumerate() {
            let v = advice[cell.column.index][cell.row];
            let dst = layout.coeff_cell(i, t);
            advice[dst.column.index][dst.row] = v;
        }
    }
    let mu_col = &mut advice[layout.mu.index];
    mu_col.iter_mut().for_each(|v| *v = F::ZERO);
    mu_col[0] = mu;
}

/// Fills the result (and power) columns and returns `ρ`. `psi` lands in
/// the result column's slack row.
pub(crate) fn fill_result<F: PrimeField>(layout: &HornerLayout, advice: &mut [Vec<F>], alpha: F, beta: F, psi: F) -> F {
    let m = layout.m;
    let nh = layout.n_horner;
    let agg = |advice: &[Vec<F>], j: usize, r: usize| {
        let mut acc = F::ZERO;
        for cols in layout.witness_columns.iter().rev() {
            acc = (acc + advice[cols[j].index][r]) * alpha;
        }
        acc
    };
    let mut rho = vec![F::ZERO; nh + 1];
    match &layout.gadget {
        Gadget::Horner => {
            for r in (0..nh).rev() {
                let mut acc = rho[r + 1];
                for j in (0..m).rev() {
                    acc = agg(advice, j, r) + beta * acc;
                }
                rho[r] = advice[layout.mu.index][r] + acc;
            }
        }
        Gadget::Strawman { powers, .. } => {
            let mut p = F::ONE;
            for r in 0..nh {
                for col in powers {
                    advice[col.index][r] = p;
                    p *= beta;
                }
            }
            for r in (0..nh).rev() {
                let mut acc = rho[r + 1] + advice[layout.mu.index][r];
                for (j, col) in powers.iter().enumerate() {
                    acc += agg(advice, j, r) * advice[col.index][r];
                }
                rho[r] = acc;
            }
        }
    }
    let col = &mut advice[layout.rho.index];
    col[..=nh].copy_from_slice(&rho);
    col[nh + 1] = psi;
    rho[0]
}

/// Extends a base assignment to the transformed circuit for given `μ`,
/// `α`, `β` and slack blinder `ψ`.
#[allow(clippy::too_many_arguments)]
pub fn horner_witness_transform<F: PrimeField>(
    assignment: &Assignment<F>,
    index: &CircuitIndex<F>,
    layout: &HornerLayout,
    mu: F,
    alpha: F,
    beta: F,
    psi: F,
) -> Result<Assignment<F>> {
    let base_columns = layout.witness_columns[0][0].index;
    if assignment.advice.len() != base_columns || assignment.advice.iter().any(|c| c.len() != index.n()) {
        return Err(Error::LayoutMismatch(format!(
            "assignment has {} advice columns, the untransformed circuit {}",
            assignment.advice.len(),
            base_columns
        )));
    }
    let mut out = assignment.clone();
    out.extend_to(index);
    fill_copies(layout, &mut out.advice, mu);
    fill_result(layout, &mut out.advice, alpha, beta, psi);
    out.challenges.resize(index.cs().challenge_phases.len(), F::ZERO);
    out.challenges[layout.alpha] = alpha;
    out.challenges[layout.beta] = beta;
    Ok(out)
}
