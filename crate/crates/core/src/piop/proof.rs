use crate::algebra::PrimeField;
use crate::codec::{Reader, Writer};
use crate::commit::{BatchProof, PrimeGroup};
use crate::error::{Error, Result};
use crate::plonkish::{Column, ColumnKind};

use super::constraint::{Oracle, QueryPoint};

/// A Plonkish proof: per-round advice commitments, the grand-product and
/// quotient commitments, the claimed evaluations and one batch opening.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlonkProof<G: PrimeGroup> {
    /// `advice_commitments[phase][j]` commits to the `j`-th advice column of
    /// that phase.
    pub advice_commitments: Vec<Vec<G>>,
    pub z_commitments: Vec<G>,
    pub quotient_commitments: Vec<G>,
    pub evals: Vec<(Oracle, QueryPoint, G::Scalar)>,
    pub opening: BatchProof<G>,
}

fn write_oracle(w: &mut Writer, o: Oracle) {
    let (tag, idx) = match o {
        Oracle::Column(c) => (
            match c.kind {
                ColumnKind::Fixed => 0,
                ColumnKind::Advice => 1,
                ColumnKind::Instance => 2,
            },
            c.index,
        ),
        Oracle::Sigma(i) => (3, i),
        Oracle::Z(i) => (4, i),
        Oracle::Quotient => (5, 0),
    };
    w.put_u8(tag);
    w.put_u32(idx as u32);
}

fn read_oracle(r: &mut Reader<'_>) -> Result<Oracle> {
    let tag = r.get_u8()?;
    let idx = r.get_u32()? as usize;
    Ok(match tag {
        0 => Oracle::Column(Column::fixed(idx)),
        1 => Oracle::Column(Column::advice(idx)),
        2 => Oracle::Column(Column::instance(idx)),
        3 => Oracle::Sigma(idx),
        4 => Oracle::Z(idx),
        5 => Oracle::Quotient,
        t => return Err(Error::ProofDecode(format!("unknown oracle tag {t}"))),
    })
}

impl<G: PrimeGroup> PlonkProof<G> {
    pub fn write(&self, w: &mut Writer) {
        w.section(b"PLNK", |s| {
            s.section(b"ADVC", |s| {
                s.put_len(self.advice_commitments.len());
                for round in &self.advice_commitments {
                    s.put_points(round);
                }
            });
            s.section(b"PERM", |s| s.put_points(&self.z_commitments));
            s.section(b"QUOT", |s| s.put_points(&self.quotient_commitments));
            s.section(b"EVAL", |s| {
                s.put_len(self.evals.len());
                for (o, p, v) in &self.evals {
                    write_oracle(s, *o);
                    s.put_u8(p.id());
                    s.put_scalar(v);
                }
            });
            s.section(b"OPEN", |s| self.opening.write(s));
        });
    }

    pub fn read(r: &mut Reader<'_>) -> Result<Self> {
        let mut s = r.section(b"PLNK")?;

        let mut a = s.section(b"ADVC")?;
        let rounds = a.get_len(8)?;
        let advice_commitments = (0..rounds).map(|_| a.get_points()).collect::<Result<Vec<_>>>()?;
        a.finish()?;

        let mut p = s.section(b"PERM")?;
        let z_commitments = p.get_points()?;
        p.finish()?;

        let mut q = s.section(b"QUOT")?;
        let quotient_commitments = q.get_points()?;
        q.finish()?;

        let mut e = s.section(b"EVAL")?;
        let count = e.get_len(6 + G::Scalar::ENCODED_LEN)?;
        let mut evals = Vec::with_capacity(count);
        for _ in 0..count {
            let o = read_oracle(&mut e)?;
            let id = e.get_u8()?;
            let point = QueryPoint::from_id(id).ok_or_else(|| Error::ProofDecode(format!("unknown point id {id}")))?;
            evals.push((o, point, e.get_scalar()?));
        }
        e.finish()?;

        let mut o = s.section(b"OPEN")?;
        let opening = BatchProof::read(&mut o)?;
        o.finish()?;
        s.finish()?;

        Ok(PlonkProof {
            advice_commitments,
            z_commitments,
            quotient_commitments,
            evals,
            opening,
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let proof = Self::read(&mut r)?;
        r.finish()?;
        Ok(proof)
    }

    /// Claimed evaluation of `oracle` at `point`, if the proof carries one.
    pub fn eval(&self, oracle: Oracle, point: QueryPoint) -> Option<G::Scalar> {
        self.evals
            .iter()
            .find(|(o, p, _)| *o == oracle && *p == point)
            .map(|(.., v)| *v)
    }
}
