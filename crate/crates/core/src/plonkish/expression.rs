use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::PrimeField;
use crate::codec::{Reader, Writer};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColumnKind {
    Fixed,
    Advice,
    Instance,
}

/// A column of the grid, identified by kind and index within that kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Column {
    pub kind: ColumnKind,
    pub index: usize,
}

impl Column {
    pub fn fixed(index: usize) -> Self {
        Column {
            kind: ColumnKind::Fixed,
            index,
        }
    }

    pub fn advice(index: usize) -> Self {
        Column {
            kind: ColumnKind::Advice,
            index,
        }
    }

    pub fn instance(index: usize) -> Self {
        Column {
            kind: ColumnKind::Instance,
            index,
        }
    }

    /// This column at the current row.
    pub fn cur<F>(self) -> Expression<F> {
        Expression::Query(self, Rotation::CUR)
    }

    /// This column at the next row.
    pub fn next<F>(self) -> Expression<F> {
        Expression::Query(self, Rotation::NEXT)
    }

    /// This column at the previous row.
    pub fn prev<F>(self) -> Expression<F> {
        Expression::Query(self, Rotation::PREV)
    }

    pub fn rot<F>(self, rotation: i32) -> Expression<F> {
        Expression::Query(self, Rotation(rotation))
    }

    pub fn at(self, row: usize) -> Cell {
        Cell { column: self, row }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            ColumnKind::Fixed => "f",
            ColumnKind::Advice => "a",
            ColumnKind::Instance => "i",
        };
        write!(f, "{tag}{}", self.index)
    }
}

/// Row offset of a query relative to the row a gate is evaluated at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rotation(pub i32);

impl Rotation {
    pub const PREV: Rotation = Rotation(-1);
    pub const CUR: Rotation = Rotation(0);
    pub const NEXT: Rotation = Rotation(1);
}

/// A single grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub column: Column,
    pub row: usize,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.column, self.row)
    }
}

/// Multivariate polynomial over column queries and challenges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expression<F> {
    Constant(F),
    Query(Column, Rotation),
    Challenge(usize),
    Negated(Box<Expression<F>>),
    Sum(Box<Expression<F>>, Box<Expression<F>>),
    Product(Box<Expression<F>>, Box<Expression<F>>),
    Scaled(Box<Expression<F>>, F),
}

impl<F: PrimeField> Expression<F> {
    pub fn constant(v: F) -> Self {
        Expression::Constant(v)
    }

    pub fn challenge(index: usize) -> Self {
        Expression::Challenge(index)
    }

    /// Degree in the column queries; challenges and constants count as 0.
    pub fn degree(&self) -> usize {
        match self {
            Expression::Constant(_) | Expression::Challenge(_) => 0,
            Expression::Query(..) => 1,
            Expression::Negated(e) | Expression::Scaled(e, _) => e.degree(),
            Expression::Sum(a, b) => a.degree().max(b.degree()),
            Expression::Product(a, b) => a.degree() + b.degree(),
        }
    }

    /// Generic fold over the tree.
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate<T>(
        &self,
        constant: &impl Fn(F) -> T,
        query: &impl Fn(Column, Rotation) -> T,
        challenge: &impl Fn(usize) -> T,
        negated: &impl Fn(T) -> T,
        sum: &impl Fn(T, T) -> T,
        product: &impl Fn(T, T) -> T,
        scaled: &impl Fn(T, F) -> T,
    ) -> T {
        let rec = |e: &Expression<F>| e.evaluate(constant, query, challenge, negated, sum, product, scaled);
        match self {
            Expression::Constant(v) => constant(*v),
            Expression::Query(c, r) => query(*c, *r),
            Expression::Challenge(i) => challenge(*i),
            Expression::Negated(e) => negated(rec(e)),
            Expression::Sum(a, b) => sum(rec(a), rec(b)),
            Expression::Product(a, b) => product(rec(a), rec(b)),
            Expression::Scaled(e, f) => scaled(rec(e), *f),
        }
    }

    /// Evaluates to a field element given values for queries and challenges.
    pub fn evaluate_scalar(&self, query: &impl Fn(Column, Rotation) -> F, challenges: &[F]) -> F {
        self.evaluate(
            &|c| c,
            query,
            &|i| challenges[i],
            &|a| -a,
            &|a, b| a + b,
            &|a, b| a * b,
            &|a, f| a * f,
        )
    }

    fn visit(&self, f: &mut impl FnMut(&Expression<F>)) {
        f(self);
        match self {
            Expression::Negated(e) | Expression::Scaled(e, _) => e.visit(f),
            Expression::Sum(a, b) | Expression::Product(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Every distinct (column, rotation) the expression reads.
    pub fn queries(&self) -> BTreeSet<(Column, Rotation)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expression::Query(c, r) = e {
                out.insert((*c, *r));
            }
        });
        out
    }

    /// Every challenge index the expression reads.
    pub fn challenges(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let Expression::Challenge(i) = e {
                out.insert(*i);
            }
        });
        out
    }

    pub(crate) fn write(&self, w: &mut Writer) {
        match self {
            Expression::Constant(v) => {
                w.put_u8(0);
                w.put_scalar(v);
            }
            Expression::Query(c, r) => {
                w.put_u8(1);
                w.put_u8(match c.kind {
                    ColumnKind::Fixed => 0,
                    ColumnKind::Advice => 1,
                    ColumnKind::Instance => 2,
                });
                w.put_len(c.index);
                w.put_i64(r.0 as i64);
            }
            Expression::Challenge(i) => {
                w.put_u8(2);
                w.put_len(*i);
            }
            Expression::Negated(e) => {
                w.put_u8(3);
                e.write(w);
            }
            Expression::Sum(a, b) => {
                w.put_u8(4);
                a.write(w);
                b.write(w);
            }
            Expression::Product(a, b) => {
                w.put_u8(5);
                a.write(w);
                b.write(w);
            }
            Expression::Scaled(e, f) => {
                w.put_u8(6);
                e.write(w);
                w.put_scalar(f);
            }
        }
    }

    pub(crate) fn read(r: &mut Reader<'_>, depth: usize) -> Result<Self> {
        if depth > 256 {
            return Err(Error::ProofDecode("expression nested too deeply".into()));
        }
        let boxed = |r: &mut Reader<'_>| Self::read(r, depth + 1).map(Box::new);
        Ok(match r.get_u8()? {
            0 => Expression::Constant(r.get_scalar()?),
            1 => {
                let kind = match r.get_u8()? {
                    0 => ColumnKind::Fixed,
                    1 => ColumnKind::Advice,
                    2 => ColumnKind::Instance,
                    t => return Err(Error::ProofDecode(format!("column kind {t}"))),
                };
                let index = r.get_len(0)?;
                let rot = r.get_i64()?;
                let rot = i32::try_from(rot).map_err(|_| Error::ProofDecode("rotation".into()))?;
                Expression::Query(Column { kind, index }, Rotation(rot))
            }
            2 => Expression::Challenge(r.get_len(0)?),
            3 => Expression::Negated(boxed(r)?),
            4 => Expression::Sum(boxed(r)?, boxed(r)?),
            5 => Expression::Product(boxed(r)?, boxed(r)?),
            6 => Expression::Scaled(boxed(r)?, r.get_scalar()?),
            t => return Err(Error::ProofDecode(format!("expression tag {t}"))),
        })
    }
}

impl<F: PrimeField> Add for Expression<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Expression::Sum(Box::new(self), Box::new(rhs))
    }
}

impl<F: PrimeField> Sub for Expression<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Expression::Sum(Box::new(self), Box::new(Expression::Negated(Box::new(rhs))))
    }
}

impl<F: PrimeField> Mul for Expression<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Expression::Product(Box::new(self), Box::new(rhs))
    }
}

impl<F: PrimeField> Mul<F> for Expression<F> {
    type Output = Self;
    fn mul(self, rhs: F) -> Self {
        Expression::Scaled(Box::new(self), rhs)
    }
}

impl<F: PrimeField> Neg for Expression<F> {
    type Output = Self;
    fn neg(self) -> Self {
        Expression::Negated(Box::new(self))
    }
}
