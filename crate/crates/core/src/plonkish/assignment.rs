use std::fmt::Write as _;

use crate::algebra::PrimeField;
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};

use super::circuit::{CircuitIndex, ConstraintSystem};
use super::expression::{Cell, Column, ColumnKind, Rotation};

/// Advice values for every column and row, plus the challenge values the
/// witness was generated under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment<F> {
    pub advice: Vec<Vec<F>>,
    pub challenges: Vec<F>,
}

impl<F: PrimeField> Assignment<F> {
    /// All-zero advice grid shaped for `index`.
    pub fn new(index: &CircuitIndex<F>) -> Self {
        Assignment {
            advice: vec![vec![F::ZERO; index.n()]; index.cs().num_advice()],
            challenges: Vec::new(),
        }
    }

    pub fn get(&self, cell: Cell) -> F {
        assert_eq!(cell.column.kind, ColumnKind::Advice);
        self.advice[cell.column.index][cell.row]
    }

    pub fn set(&mut self, cell: Cell, value: F) {
        assert_eq!(cell.column.kind, ColumnKind::Advice, "{cell} is not an advice cell");
        self.advice[cell.column.index][cell.row] = value;
    }

    /// Grows the grid to `index`'s shape, keeping existing values; used
    /// after a circuit transform has added columns.
    pub fn extend_to(&mut self, index: &CircuitIndex<F>) {
        let n = index.n();
        for col in self.advice.iter_mut() {
            col.resize(n, F::ZERO);
        }
        self.advice.resize(index.cs().num_advice(), vec![F::ZERO; n]);
    }

    pub fn write(&self, w: &mut Writer) {
        w.section(b"ASGN", |s| {
            s.put_len(self.advice.len());
            for col in &self.advice {
                s.put_scalars(col);
            }
            s.put_scalars(&self.challenges);
        });
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let mut s = r.section(b"ASGN")?;
        let cols = s.get_len(8)?;
        let advice = (0..cols).map(|_| s.get_scalars()).collect::<Result<Vec<_>>>()?;
        let challenges = s.get_scalars()?;
        s.finish()?;
        Ok(Assignment { advice, challenges })
    }
}

/// Public instance columns, zero-padded to the domain size.
pub fn pad_instance<F: PrimeField>(index: &CircuitIndex<F>, instance: &[Vec<F>]) -> Result<Vec<Vec<F>>> {
    pad_instance_shape(index.cs(), index.n(), index.usable_rows(), instance)
}

/// [`pad_instance`] from the constraint system and domain shape alone.
pub fn pad_instance_shape<F: PrimeField>(
    cs: &ConstraintSystem<F>,
    n: usize,
    usable: usize,
    instance: &[Vec<F>],
) -> Result<Vec<Vec<F>>> {
    if instance.len() != cs.num_instance {
        return Err(Error::ShapeMismatch(format!(
            "{} instance columns given, circuit declares {}",
            instance.len(),
            cs.num_instance
        )));
    }
    instance
        .iter()
        .map(|col| {
            if col.len() > usable {
                return Err(Error::ShapeMismatch(format!(
                    "instance column of {} values exceeds {usable} usable rows",
                    col.len(),
                )));
            }
            let mut c = col.clone();
            c.resize(n, F::ZERO);
            Ok(c)
        })
        .collect()
}

/// First reason an assignment fails to satisfy a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    Gate { gate: String, row: usize },
    Copy { a: Cell, b: Cell },
}

fn value_at<F: PrimeField>(
    index: &CircuitIndex<F>,
    instance: &[Vec<F>],
    assignment: &Assignment<F>,
    column: Column,
    row: usize,
) -> F {
    match column.kind {
        ColumnKind::Fixed => index.fixed()[column.index][row],
        ColumnKind::Advice => assignment.advice[column.index][row],
        ColumnKind::Instance => instance[column.index][row],
    }
}

/// Evaluates every gate on every usable row and compares every copy cycle,
/// without touching commitments or transcripts.
pub fn find_violation<F: PrimeField>(
    index: &CircuitIndex<F>,
    instance: &[Vec<F>],
    assignment: &Assignment<F>,
) -> Option<Violation> {
    let cs = index.cs();
    let n = index.n();
    if assignment.advice.len() != cs.num_advice() || assignment.advice.iter().any(|c| c.len() != n) {
        return Some(Violation::Shape("advice grid does not match the circuit".into()));
    }
    if assignment.challenges.len() < cs.challenge_phases.len() {
        return Some(Violation::Shape("missing challenge values".into()));
    }
    let instance = match pad_instance(index, instance) {
        Ok(i) => i,
        Err(e) => return Some(Violation::Shape(e.to_string())),
    };

    for gate in &cs.gates {
        for row in 0..index.usable_rows() {
            let query = |c: Column, r: Rotation| {
                let at = (row as i64 + r.0 as i64).rem_euclid(n as i64) as usize;
                value_at(index, &instance, assignment, c, at)
            };
            if !gate.expr.evaluate_scalar(&query, &assignment.challenges).is_zero() {
                return Some(Violation::Gate {
                    gate: gate.name.clone(),
                    row,
                });
            }
        }
    }
    for cycle in index.cycles() {
        let first = cycle[0];
        let v = value_at(index, &instance, assignment, first.column, first.row);
        for cell in &cycle[1..] {
            if value_at(index, &instance, assignment, cell.column, cell.row) != v {
                return Some(Violation::Copy { a: first, b: *cell });
            }
        }
    }
    None
}

pub fn check_satisfiability<F: PrimeField>(
    index: &CircuitIndex<F>,
    instance: &[Vec<F>],
    assignment: &Assignment<F>,
) -> bool {
    find_violation(index, instance, assignment).is_none()
}

/// Short human-readable rendering of a field element: small signed
/// integers print as such, anything else as truncated hex.
pub fn display_scalar<F: PrimeField>(v: F) -> String {
    let small = |x: F| {
        let bytes = x.to_le_bytes();
        if bytes.len() > 8 && bytes[8..].iter().all(|b| *b == 0) {
            Some(u64::from_le_bytes(bytes[..8].try_into().unwrap()))
        } else if bytes.len() <= 8 {
            let mut buf = [0u8; 8];
            buf[..bytes.len()].copy_from_slice(&bytes);
            Some(u64::from_le_bytes(buf))
        } else {
            None
        }
    };
    match (small(v), small(-v)) {
        (Some(a), Some(b)) if b < a => format!("-{b}"),
        (Some(a), _) => a.to_string(),
        (None, Some(b)) => format!("-{b}"),
        (None, None) => {
            let hex: String = v.to_le_bytes().iter().rev().take(4).map(|b| format!("{b:02x}")).collect();
            format!("0x{hex}…")
        }
    }
}

/// Renders the grid as rows × columns (fixed, advice, instance).
pub fn debug_grid<F: PrimeField>(index: &CircuitIndex<F>, instance: &[Vec<F>], assignment: &Assignment<F>) -> String {
    let cs = index.cs();
    let instance = pad_instance(index, instance).unwrap_or_default();
    let mut columns: Vec<Column> = (0..cs.num_fixed).map(Column::fixed).collect();
    columns.extend((0..cs.num_advice()).map(Column::advice));
    columns.extend((0..instance.len()).map(Column::instance));
    let mut out = String::new();
    let _ = write!(out, "{:>5}", "row");
    for c in &columns {
        let _ = write!(out, " {:>12}", c.to_string());
    }
    out.push('\n');
    for row in 0..index.n() {
        let _ = write!(out, "{row:>5}");
        for c in &columns {
            let v = if c.kind == ColumnKind::Advice && c.index >= assignment.advice.len() {
                String::from("?")
            } else {
                display_scalar(value_at(index, &instance, assignment, *c, row))
            };
            let _ = write!(out, " {v:>12}");
        }
        if row == index.usable_rows() {
            out.push_str("   <- blinding");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plonkish::CircuitBuilder;
    use pasta_curves::pallas;

    type Fq = pallas::Scalar;

    fn mul_circuit() -> (CircuitIndex<Fq>, [Column; 3]) {
        let mut b = CircuitBuilder::<Fq>::new(4).unwrap();
        let a = b.advice_column(0);
        let bb = b.advice_column(0);
        let c = b.advice_column(0);
        let q = b.fixed_column();
        b.gate("mul", q.cur() * (a.cur() * bb.cur() - c.cur()));
        b.set_fixed(q, 0, Fq::ONE);
        b.set_fixed(q, 1, Fq::ONE);
        b.copy(c.at(0), a.at(1));
        (b.build().unwrap(), [a, bb, c])
    }

    #[test]
    fn zero_assignment_satisfies_homogeneous_gates() {
        let (idx, _) = mul_circuit();
        assert!(check_satisfiability(&idx, &[], &Assignment::new(&idx)));
    }

    #[test]
    fn multiplication_examples() {
        let (idx, [a, b, c]) = mul_circuit();
        let mut asg = Assignment::new(&idx);
        asg.set(a.at(0), Fq::from_u64(2));
        asg.set(b.at(0), Fq::from_u64(3));
        asg.set(c.at(0), Fq::from_u64(6));
        asg.set(a.at(1), Fq::from_u64(6));
        asg.set(b.at(1), Fq::from_u64(5));
        asg.set(c.at(1), Fq::from_u64(30));
        assert!(check_satisfiability(&idx, &[], &asg));
        asg.set(c.at(1), Fq::from_u64(31));
        assert_eq!(
            find_violation(&idx, &[], &asg),
            Some(Violation::Gate {
                gate: "mul".into(),
                row: 1
            })
        );
        // c = 7 breaks both the gate at row 0 and the copy into row 1.
        asg.set(c.at(1), Fq::from_u64(30));
        asg.set(c.at(0), Fq::from_u64(7));
        assert!(!check_satisfiability(&idx, &[], &asg));
    }

    #[test]
    fn every_single_cell_flip_is_caught() {
        let (idx, [a, b, c]) = mul_circuit();
        let mut asg = Assignment::new(&idx);
        for (cell, v) in [
            (a.at(0), 2),
            (b.at(0), 3),
            (c.at(0), 6),
            (a.at(1), 6),
            (b.at(1), 5),
            (c.at(1), 30),
        ] {
            asg.set(cell, Fq::from_u64(v));
        }
        assert!(check_satisfiability(&idx, &[], &asg));
        for col in [a, b, c] {
            for row in 0..2 {
                let mut bad = asg.clone();
                bad.set(col.at(row), bad.get(col.at(row)) + Fq::ONE);
                assert!(!check_satisfiability(&idx, &[], &bad), "{}", col.at(row));
            }
        }
    }

    #[test]
    fn grid_dump_and_display() {
        let (idx, [a, ..]) = mul_circuit();
        let mut asg = Assignment::new(&idx);
        asg.set(a.at(0), -Fq::from_u64(4));
        let dump = debug_grid(&idx, &[], &asg);
        assert!(dump.contains("-4"));
        assert_eq!(dump.lines().count(), 1 + idx.n());
        assert_eq!(display_scalar(Fq::from_u64(12)), "12");
    }

    #[test]
    fn assignment_round_trip() {
        let (idx, [a, ..]) = mul_circuit();
        let mut asg = Assignment::new(&idx);
        asg.set(a.at(3), Fq::from_u64(99));
        asg.challenges.push(Fq::from_u64(5));
        let mut w = Writer::new();
        asg.write(&mut w);
        let bytes = w.into_bytes();
        assert_eq!(Assignment::read(&mut Reader::new(&bytes)).unwrap(), asg);
    }
}
