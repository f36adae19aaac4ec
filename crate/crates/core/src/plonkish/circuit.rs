use std::collections::{BTreeSet, HashMap};

use crate::algebra::{EvaluationDomain, PrimeField};
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};

use super::expression::{Cell, Column, ColumnKind, Expression, Rotation};

/// Rows at the bottom of every column reserved for blinding: up to three
/// openings per polynomial, two spare blinders, and one more for the
/// Horner result column's extra blinder.
pub const BLINDING_RESERVE: usize = 6;

/// Smallest supported domain: enough rows for the reserve plus two usable.
pub const MIN_LOG_SIZE: u32 = 3;

const MAX_ROTATION: i32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate<F> {
    pub name: String,
    pub expr: Expression<F>,
}

/// Column, challenge and constraint declarations of a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem<F> {
    pub num_fixed: usize,
    /// Phase (commitment round) of each advice column.
    pub advice_phases: Vec<u8>,
    pub num_instance: usize,
    /// Challenge `i` is squeezed once phase `challenge_phases[i]` is
    /// committed.
    pub challenge_phases: Vec<u8>,
    pub gates: Vec<Gate<F>>,
    /// Columns taking part in copy constraints, in label order.
    pub permutation_columns: Vec<Column>,
    /// Declared bound on the constraint degree, if any.
    pub degree_bound: Option<usize>,
}

impl<F> Default for ConstraintSystem<F> {
    fn default() -> Self {
        ConstraintSystem {
            num_fixed: 0,
            advice_phases: Vec::new(),
            num_instance: 0,
            challenge_phases: Vec::new(),
            gates: Vec::new(),
            permutation_columns: Vec::new(),
            degree_bound: None,
        }
    }
}

impl<F: PrimeField> ConstraintSystem<F> {
    pub fn num_advice(&self) -> usize {
        self.advice_phases.len()
    }

    /// Number of advice commitment rounds.
    pub fn num_phases(&self) -> u8 {
        let advice = self.advice_phases.iter().copied().max().map_or(1, |p| p + 1);
        let challenges = self.challenge_phases.iter().copied().max().map_or(0, |p| p + 1);
        advice.max(challenges)
    }

    /// Challenge indices issued after `phase`.
    pub fn challenges_after(&self, phase: u8) -> Vec<usize> {
        (0..self.challenge_phases.len())
            .filter(|&i| self.challenge_phases[i] == phase)
            .collect()
    }

    /// Advice columns committed in `phase`.
    pub fn advice_in_phase(&self, phase: u8) -> Vec<usize> {
        (0..self.advice_phases.len())
            .filter(|&i| self.advice_phases[i] == phase)
            .collect()
    }

    /// Degree of the aggregated constraint: gates carry an extra factor
    /// restricting them to usable rows, and the permutation argument needs
    /// at least degree 3.
    pub fn degree(&self) -> usize {
        let gates = self.gates.iter().map(|g| g.expr.degree() + 1).max().unwrap_or(0);
        let computed = gates.max(3);
        let degree = self.degree_bound.map_or(computed, |b| b.max(computed));
        // The extended domain holds (degree − 1)·n rounded up to a power of
        // two; use all of it so permutation chunks are as long as possible.
        (degree - 1).next_power_of_two() + 1
    }

    /// Columns folded into each permutation product term.
    pub fn permutation_chunk_len(&self) -> usize {
        self.degree() - 2
    }

    pub fn num_permutation_chunks(&self) -> usize {
        self.permutation_columns.len().div_ceil(self.permutation_chunk_len())
    }

    pub fn num_quotient_chunks(&self) -> usize {
        self.degree() - 1
    }

    /// Rotations at which `column` is opened: the current row always, plus
    /// whatever the gates read.
    pub fn rotations(&self, column: Column) -> Vec<Rotation> {
        let mut rots = BTreeSet::from([Rotation::CUR]);
        for g in &self.gates {
            for (c, r) in g.expr.queries() {
                if c == column {
                    rots.insert(r);
                }
            }
        }
        rots.into_iter().collect()
    }

    pub fn permutation_position(&self, column: Column) -> Option<usize> {
        self.permutation_columns.iter().position(|c| *c == column)
    }

    fn column_exists(&self, c: Column) -> bool {
        match c.kind {
            ColumnKind::Fixed => c.index < self.num_fixed,
            ColumnKind::Advice => c.index < self.num_advice(),
            ColumnKind::Instance => c.index < self.num_instance,
        }
    }

    fn validate_gate(&self, gate: &Gate<F>) -> Result<()> {
        let mut max_phase = None;
        for (c, r) in gate.expr.queries() {
            if !self.column_exists(c) {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` reads undeclared column {c}",
                    gate.name
                )));
            }
            if r.0.abs() > MAX_ROTATION {
                return Err(Error::RotationOutOfRange {
                    gate: gate.name.clone(),
                    rotation: r.0,
                });
            }
            if c.kind == ColumnKind::Advice {
                let p = self.advice_phases[c.index];
                max_phase = Some(max_phase.map_or(p, |m: u8| m.max(p)));
            }
        }
        for ch in gate.expr.challenges() {
            let Some(&issued_after) = self.challenge_phases.get(ch) else {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` reads undeclared challenge {ch}",
                    gate.name
                )));
            };
            // The challenge must be fixed before the latest column the gate
            // reads is committed.
            if max_phase.is_none_or(|p| issued_after >= p) {
                return Err(Error::ChallengeBeforeIssue {
                    gate: gate.name.clone(),
                    challenge: ch,
                });
            }
        }
        if let Some(bound) = self.degree_bound {
            let degree = gate.expr.degree() + 1;
            if degree > bound {
                return Err(Error::DegreeTooHigh {
                    gate: gate.name.clone(),
                    degree,
                    bound,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn write(&self, w: &mut Writer) {
        w.put_len(self.num_fixed);
        w.put_bytes(&self.advice_phases);
        w.put_len(self.num_instance);
        w.put_bytes(&self.challenge_phases);
        w.put_len(self.gates.len());
        for g in &self.gates {
            w.put_bytes(g.name.as_bytes());
            g.expr.write(w);
        }
        w.put_len(self.permutation_columns.len());
        for c in &self.permutation_columns {
            write_column(w, *c);
        }
        w.put_u64(self.degree_bound.map_or(0, |d| d as u64));
    }

    pub(crate) fn read(r: &mut Reader<'_>) -> Result<Self> {
        let num_fixed = r.get_len(0)?;
        let advice_phases = r.get_bytes()?.to_vec();
        let num_instance = r.get_len(0)?;
        let challenge_phases = r.get_bytes()?.to_vec();
        let num_gates = r.get_len(2)?;
        let mut gates = Vec::with_capacity(num_gates);
        for _ in 0..num_gates {
            let name = String::from_utf8(r.get_bytes()?.to_vec())
                .map_err(|_| Error::ProofDecode("gate name".into()))?;
            gates.push(Gate {
                name,
                expr: Expression::read(r, 0)?,
            });
        }
        let num_perm = r.get_len(9)?;
        let permutation_columns = (0..num_perm).map(|_| read_column(r)).collect::<Result<_>>()?;
        let degree_bound = match r.get_u64()? {
            0 => None,
            d => Some(d as usize),
        };
        Ok(ConstraintSystem {
            num_fixed,
            advice_phases,
            num_instance,
            challenge_phases,
            gates,
            permutation_columns,
            degree_bound,
        })
    }
}

fn write_column(w: &mut Writer, c: Column) {
    w.put_u8(match c.kind {
        ColumnKind::Fixed => 0,
        ColumnKind::Advice => 1,
        ColumnKind::Instance => 2,
    });
    w.put_len(c.index);
}

fn read_column(r: &mut Reader<'_>) -> Result<Column> {
    let kind = match r.get_u8()? {
        0 => ColumnKind::Fixed,
        1 => ColumnKind::Advice,
        2 => ColumnKind::Instance,
        t => return Err(Error::ProofDecode(format!("column kind {t}"))),
    };
    Ok(Column {
        kind,
        index: r.get_len(0)?,
    })
}

/// A validated circuit: shape, fixed values and copy cycles over a domain of
/// `2^k` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitIndex<F> {
    k: u32,
    cs: ConstraintSystem<F>,
    fixed: Vec<Vec<F>>,
    cycles: Vec<Vec<Cell>>,
}

impl<F: PrimeField> CircuitIndex<F> {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        1 << self.k
    }

    /// Rows available to the witness; the rest hold blinding values.
    pub fn usable_rows(&self) -> usize {
        self.n() - BLINDING_RESERVE
    }

    pub fn cs(&self) -> &ConstraintSystem<F> {
        &self.cs
    }

    pub fn fixed(&self) -> &[Vec<F>] {
        &self.fixed
    }

    /// Copy constraints as disjoint cycles; every listed cell holds the same
    /// value in a satisfying assignment.
    pub fn cycles(&self) -> &[Vec<Cell>] {
        &self.cycles
    }

    pub fn domain(&self) -> EvaluationDomain<F> {
        EvaluationDomain::new(self.k).expect("validated at build time")
    }

    pub fn write(&self, w: &mut Writer) {
        w.section(b"CIDX", |s| {
            s.put_u32(self.k);
            self.cs.write(s);
            for col in &self.fixed {
                s.put_scalars(col);
            }
            s.put_len(self.cycles.len());
            for cycle in &self.cycles {
                s.put_len(cycle.len());
                for cell in cycle {
                    write_column(s, cell.column);
                    s.put_len(cell.row);
                }
            }
        });
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let mut s = r.section(b"CIDX")?;
        let k = s.get_u32()?;
        let cs = ConstraintSystem::<F>::read(&mut s)?;
        let fixed = (0..cs.num_fixed).map(|_| s.get_scalars()).collect::<Result<Vec<_>>>()?;
        let num_cycles = s.get_len(8)?;
        let mut cycles = Vec::with_capacity(num_cycles);
        for _ in 0..num_cycles {
            let len = s.get_len(17)?;
            let mut cycle = Vec::with_capacity(len);
            for _ in 0..len {
                let column = read_column(&mut s)?;
                cycle.push(Cell {
                    column,
                    row: s.get_len(0)?,
                });
            }
            cycles.push(cycle);
        }
        s.finish()?;
        let mut b = CircuitBuilder::new(k)?;
        b.cs = cs;
        b.fixed = fixed;
        for cycle in cycles {
            b.cycle(&cycle)?;
        }
        b.build()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let idx = Self::read(&mut r)?;
        r.finish()?;
        Ok(idx)
    }
}

/// Incrementally declares a circuit; [`CircuitBuilder::build`] validates it.
#[derive(Clone, Debug)]
pub struct CircuitBuilder<F> {
    k: u32,
    cs: ConstraintSystem<F>,
    fixed: Vec<Vec<F>>,
    /// Equality classes as ordered cell lists; `None` once merged away.
    classes: Vec<Option<Vec<Cell>>>,
    class_of: HashMap<Cell, usize>,
}

impl<F: PrimeField> CircuitBuilder<F> {
    pub fn new(k: u32) -> Result<Self> {
        if k < MIN_LOG_SIZE {
            return Err(Error::InvalidCircuit(format!(
                "domain 2^{k} leaves no usable rows after the blinding reserve"
            )));
        }
        EvaluationDomain::<F>::new(k)?;
        Ok(CircuitBuilder {
            k,
            cs: ConstraintSystem::default(),
            fixed: Vec::new(),
            classes: Vec::new(),
            class_of: HashMap::new(),
        })
    }

    /// Starts from an existing index so further columns, gates and copies
    /// can be added.
    pub fn from_index(index: &CircuitIndex<F>) -> Self {
        let mut b = CircuitBuilder {
            k: index.k,
            cs: index.cs.clone(),
            fixed: index.fixed.clone(),
            classes: Vec::new(),
            class_of: HashMap::new(),
        };
        for cycle in &index.cycles {
            b.cycle(cycle).expect("index cycles are disjoint");
        }
        b
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        1 << self.k
    }

    pub fn usable_rows(&self) -> usize {
        self.n() - BLINDING_RESERVE
    }

    pub fn cs(&self) -> &ConstraintSystem<F> {
        &self.cs
    }

    pub fn fixed_column(&mut self) -> Column {
        self.cs.num_fixed += 1;
        self.fixed.push(vec![F::ZERO; self.n()]);
        Column::fixed(self.cs.num_fixed - 1)
    }

    pub fn advice_column(&mut self, phase: u8) -> Column {
        self.cs.advice_phases.push(phase);
        Column::advice(self.cs.advice_phases.len() - 1)
    }

    pub fn instance_column(&mut self) -> Column {
        self.cs.num_instance += 1;
        Column::instance(self.cs.num_instance - 1)
    }

    /// Declares a challenge squeezed after `phase` is committed; returns its
    /// index for use in [`Expression::challenge`].
    pub fn challenge(&mut self, phase: u8) -> usize {
        self.cs.challenge_phases.push(phase);
        self.cs.challenge_phases.len() - 1
    }

    /// Caps the constraint degree; gates above it are rejected at build.
    pub fn set_degree_bound(&mut self, bound: usize) {
        self.cs.degree_bound = Some(bound);
    }

    pub fn enable_equality(&mut self, column: Column) {
        if self.cs.permutation_position(column).is_none() {
            self.cs.permutation_columns.push(column);
        }
    }

    pub fn gate(&mut self, name: impl Into<String>, expr: Expression<F>) {
        self.cs.gates.push(Gate {
            name: name.into(),
            expr,
        });
    }

    pub fn set_fixed(&mut self, column: Column, row: usize, value: F) {
        assert_eq!(column.kind, ColumnKind::Fixed, "{column} is not a fixed column");
        self.fixed[column.index][row] = value;
    }

    fn class_for(&mut self, cell: Cell) -> usize {
        if let Some(&c) = self.class_of.get(&cell) {
            return c;
        }
        self.classes.push(Some(vec![cell]));
        let id = self.classes.len() - 1;
        self.class_of.insert(cell, id);
        id
    }

    /// Constrains two cells to be equal.
    pub fn copy(&mut self, a: Cell, b: Cell) {
        self.enable_equality(a.column);
        self.enable_equality(b.column);
        let ca = self.class_for(a);
        let cb = self.class_for(b);
        if ca == cb {
            return;
        }
        let moved = self.classes[cb].take().expect("live class");
        for cell in &moved {
            self.class_of.insert(*cell, ca);
        }
        self.classes[ca].as_mut().expect("live class").extend(moved);
    }

    /// Adds an explicit cycle; every cell must be new to the permutation.
    pub fn cycle(&mut self, cells: &[Cell]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for c in cells {
            if self.class_of.contains_key(c) || !seen.insert(*c) {
                return Err(Error::CycleOverlap(c.to_string()));
            }
        }
        if cells.len() < 2 {
            return Ok(());
        }
        for c in cells {
            self.enable_equality(c.column);
        }
        self.classes.push(Some(cells.to_vec()));
        let id = self.classes.len() - 1;
        for c in cells {
            self.class_of.insert(*c, id);
        }
        Ok(())
    }

    pub fn build(self) -> Result<CircuitIndex<F>> {
        if self.fixed.len() != self.cs.num_fixed || self.fixed.iter().any(|c| c.len() != self.n()) {
            return Err(Error::InvalidCircuit("fixed values do not match the declared columns".into()));
        }
        for g in &self.cs.gates {
            self.cs.validate_gate(g)?;
        }
        let usable = self.usable_rows();
        let cycles: Vec<Vec<Cell>> = self
            .classes
            .into_iter()
            .flatten()
            .filter(|c| c.len() > 1)
            .collect();
        for cell in cycles.iter().flatten() {
            if !self.cs.column_exists(cell.column) {
                return Err(Error::InvalidCircuit(format!("copy uses undeclared column {}", cell.column)));
            }
            if cell.row >= usable {
                return Err(Error::RowOutOfRange {
                    cell: cell.to_string(),
                    usable,
                });
            }
        }
        Ok(CircuitIndex {
            k: self.k,
            cs: self.cs,
            fixed: self.fixed,
            cycles,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pasta_curves::pallas;

    type Fq = pallas::Scalar;

    pub(crate) fn mul_circuit() -> CircuitIndex<Fq> {
        let mut b = CircuitBuilder::<Fq>::new(4).unwrap();
        let a = b.advice_column(0);
        let bb = b.advice_column(0);
        let c = b.advice_column(0);
        let q = b.fixed_column();
        b.gate("mul", q.cur() * (a.cur() * bb.cur() - c.cur()));
        b.set_fixed(q, 0, Fq::ONE);
        b.set_fixed(q, 1, Fq::ONE);
        b.copy(c.at(0), a.at(1));
        b.build().unwrap()
    }

    #[test]
    fn empty_circuit_builds() {
        let idx = CircuitBuilder::<Fq>::new(3).unwrap().build().unwrap();
        assert_eq!(idx.usable_rows(), 2);
        assert_eq!(idx.cs().num_phases(), 1);
        assert!(CircuitBuilder::<Fq>::new(2).is_err());
    }

    #[test]
    fn challenge_ordering_enforced() {
        let mut b = CircuitBuilder::<Fq>::new(4).unwrap();
        let a0 = b.advice_column(0);
        let a1 = b.advice_column(1);
        let _a2 = b.advice_column(2);
        let late = b.challenge(1);
        b.gate("early", a1.cur() * Expression::challenge(late));
        assert_eq!(
            b.build().unwrap_err(),
            Error::ChallengeBeforeIssue {
                gate: "early".into(),
                challenge: late
            }
        );

        let mut b = CircuitBuilder::<Fq>::new(4).unwrap();
        let a0b = b.advice_column(0);
        let a1b = b.advice_column(1);
        let ch = b.challenge(0);
        b.gate("ok", a1b.cur() - a0b.cur() * Expression::challenge(ch));
        assert!(b.build().is_ok());
        let _ = a0;
    }

    #[test]
    fn builder_rejections() {
        let mut b = CircuitBuilder::<Fq>::new(4).unwrap();
        let a = b.advice_column(0);
        b.gate("far", a.cur() - a.rot(2));
        assert!(matches!(b.build(), Err(Error::RotationOutOfRange { rotation: 2, .. })));

        let mut b = CircuitBuilder::<Fq>::new(4).unwrap();
        let a = b.advice_column(0);
        b.set_degree_bound(3);
        b.gate("cube", a.cur() * a.cur() * a.cur());
        assert!(matches!(b.build(), Err(Error::DegreeTooHigh { degree: 4, bound: 3, .. })));

        let mut b = CircuitBuilder::<Fq>::new(4).unwrap();
        let a = b.advice_column(0);
        b.copy(a.at(0), a.at(1));
        assert!(matches!(b.cycle(&[a.at(1), a.at(2)]), Err(Error::CycleOverlap(_))));
        b.copy(a.at(0), a.at(10));
        assert!(matches!(b.build(), Err(Error::RowOutOfRange { .. })));
    }

    #[test]
    fn index_round_trips() {
        let idx = mul_circuit();
        let bytes = idx.to_bytes();
        assert_eq!(CircuitIndex::<Fq>::from_bytes(&bytes).unwrap(), idx);
        assert_eq!(CircuitBuilder::from_index(&idx).build().unwrap(), idx);
    }
}
