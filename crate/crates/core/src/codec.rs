//! Canonical little-endian binary container shared by every file format.
//!
//! Scalars use the field's fixed-width encoding, group elements their
//! compressed encoding, vectors an 8-byte length prefix. Larger objects are
//! split into sections: a 4-byte ASCII tag followed by a u64 payload length.

use crate::algebra::PrimeField;
use crate::commit::PrimeGroup;
use crate::error::{Error, Result};

#[derive(Default, Debug, Clone)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buf.is_empty()
    }

    pub fn put_raw(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_len(&mut self, v: usize) {
        self.put_u64(v as u64);
    }

    pub fn put_i64(&mut self, v: i64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_bytes(&mut self, bytes: &[u8]) {
        self.put_len(bytes.len());
        self.put_raw(bytes);
    }

    pub fn put_scalar<F: PrimeField>(&mut self, v: &F) {
        self.put_raw(&v.to_le_bytes());
    }

    pub fn put_scalars<F: PrimeField>(&mut self, vs: &[F]) {
        self.put_len(vs.len());
        for v in vs {
            self.put_scalar(v);
        }
    }

    pub fn put_point<G: PrimeGroup>(&mut self, p: &G) {
        self.put_raw(&p.to_bytes());
    }

    pub fn put_points<G: PrimeGroup>(&mut self, ps: &[G]) {
        self.put_len(ps.len());
        for p in ps {
            self.put_point(p);
        }
    }

    /// Writes `tag`, then the payload produced by `body`, length-prefixed.
    pub fn section(&mut self, tag: &[u8; 4], body: impl FnOnce(&mut Writer)) {
        let mut inner = Writer::new();
        body(&mut inner);
        self.put_raw(tag);
        self.put_bytes(&inner.buf);
    }
}

#[derive(Debug, Clone)]
pub struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

fn decode_err(msg: impl Into<String>) -> Error {
    Error::ProofDecode(msg.into())
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Reader { data, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(decode_err(format!(
                "needed {n} bytes at offset {}, only {} left",
                self.pos,
                self.remaining()
            )));
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn expect_raw(&mut self, expected: &[u8]) -> Result<()> {
        let got = self.take(expected.len())?;
        if got != expected {
            return Err(decode_err(format!(
                "expected {:?}, found {:?}",
                String::from_utf8_lossy(expected),
                String::from_utf8_lossy(got)
            )));
        }
        Ok(())
    }

    pub fn get_u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn get_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn get_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub fn get_i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    /// Reads a length and sanity-checks it against the remaining input,
    /// assuming every element needs at least `min_elem_bytes`.
    pub fn get_len(&mut self, min_elem_bytes: usize) -> Result<usize> {
        let len = self.get_u64()?;
        let len = usize::try_from(len).map_err(|_| decode_err("length overflow"))?;
        if len.saturating_mul(min_elem_bytes.max(1)) > self.remaining() && min_elem_bytes > 0 {
            return Err(decode_err(format!("length {len} exceeds input")));
        }
        Ok(len)
    }

    pub fn get_bytes(&mut self) -> Result<&'a [u8]> {
        let len = self.get_len(1)?;
        self.take(len)
    }

    pub fn get_scalar<F: PrimeField>(&mut self) -> Result<F> {
        let bytes = self.take(F::ENCODED_LEN)?;
        F::from_le_bytes(bytes).ok_or_else(|| decode_err("non-canonical field element"))
    }

    pub fn get_scalars<F: PrimeField>(&mut self) -> Result<Vec<F>> {
        let len = self.get_len(F::ENCODED_LEN)?;
        (0..len).map(|_| self.get_scalar()).collect()
    }

    pub fn get_point<G: PrimeGroup>(&mut self) -> Result<G> {
        let bytes = self.take(G::ENCODED_LEN)?;
        G::from_bytes(bytes).ok_or_else(|| decode_err("invalid group element"))
    }

    pub fn get_points<G: PrimeGroup>(&mut self) -> Result<Vec<G>> {
        let len = self.get_len(G::ENCODED_LEN)?;
        (0..len).map(|_| self.get_point()).collect()
    }

    /// Reads a section with the given tag and returns a reader over its
    /// payload.
    pub fn section(&mut self, tag: &[u8; 4]) -> Result<Reader<'a>> {
        self.expect_raw(tag)?;
        Ok(Reader::new(self.get_bytes()?))
    }

    pub fn finish(&self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(decode_err(format!("{} trailing bytes", self.remaining())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pasta_curves::pallas;

    #[test]
    fn sections_nest() {
        let mut w = Writer::new();
        w.section(b"HEAD", |s| {
            s.put_u64(7);
            s.put_scalars(&[pallas::Scalar::from_u64(3)]);
        });
        w.put_u8(9);
        let bytes = w.into_bytes();
        let mut r = Reader::new(&bytes);
        let mut head = r.section(b"HEAD").unwrap();
        assert_eq!(head.get_u64().unwrap(), 7);
        assert_eq!(
            head.get_scalars::<pallas::Scalar>().unwrap(),
            vec![pallas::Scalar::from_u64(3)]
        );
        head.finish().unwrap();
        assert_eq!(r.get_u8().unwrap(), 9);
        r.finish().unwrap();
    }

    #[test]
    fn wrong_tag_and_truncation() {
        let mut w = Writer::new();
        w.section(b"AAAA", |s| s.put_u64(1));
        let bytes = w.into_bytes();
        assert!(Reader::new(&bytes).section(b"BBBB").is_err());
        assert!(Reader::new(&bytes[..bytes.len() - 1]).section(b"AAAA").is_err());
        let mut r = Reader::new(&[0xff; 8]);
        assert!(r.get_len(32).is_err());
    }
}
