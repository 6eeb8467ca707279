//! Byte-level primitives shared by the binary formats: LEB128 varints,
//! zigzag signed integers, polynomials and monomials.

use crate::int::Int;
use crate::laurent::TPoly;
use crate::monomial::Monomial;

use super::FormatError;

pub fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

pub fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

pub fn unzigzag(v: u64) -> i64 {
    ((v >> 1) as i64) ^ -((v & 1) as i64)
}

pub fn put_svarint(out: &mut Vec<u8>, v: i64) {
    put_varint(out, zigzag(v));
}

pub fn put_poly(out: &mut Vec<u8>, p: &TPoly) {
    put_varint(out, p.len() as u64);
    for (e, c) in p.terms() {
        put_svarint(out, e as i64);
        match c.to_i64() {
            Some(v) if fits_small(v) => put_varint(out, zigzag(v) << 1),
            _ => {
                let bytes = c.to_signed_bytes_le();
                put_varint(out, ((bytes.len() as u64) << 1) | 1);
                out.extend_from_slice(&bytes);
            }
        }
    }
}

// Coefficients within ±2^61 are written as an even varint `zigzag(c) << 1`;
// anything else as an odd length tag followed by two's complement bytes.
fn fits_small(v: i64) -> bool {
    (-(1i64 << 61)..(1i64 << 61)).contains(&v)
}

pub fn put_monomial(out: &mut Vec<u8>, m: &Monomial) {
    put_varint(out, m.num_factors() as u64);
    let mut prev_node = 0u64;
    for f in m.factors() {
        put_varint(out, f.node as u64 - prev_node);
        prev_node = f.node as u64;
        put_svarint(out, f.index as i64);
        put_svarint(out, f.exp as i64);
    }
}

/// A cursor over a byte slice with format-level error reporting.
pub struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn is_empty(&self) -> bool {
        self.pos >= self.buf.len()
    }

    pub fn byte(&mut self) -> Result<u8, FormatError> {
        let b = *self.buf.get(self.pos).ok_or(FormatError::Truncated)?;
        self.pos += 1;
        Ok(b)
    }

    pub fn bytes(&mut self, n: usize) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(n).ok_or(FormatError::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(FormatError::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    pub fn u16_le(&mut self) -> Result<u16, FormatError> {
        let b = self.bytes(2)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    pub fn varint(&mut self) -> Result<u64, FormatError> {
        let mut v = 0u64;
        let mut shift = 0;
        loop {
            let b = self.byte()?;
            if shift >= 64 || (shift == 63 && b > 1) {
                return Err(FormatError::Corrupt("varint overflow"));
            }
            v |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                return Ok(v);
            }
            shift += 7;
        }
    }

    pub fn svarint(&mut self) -> Result<i64, FormatError> {
        Ok(unzigzag(self.varint()?))
    }

    pub fn len_field(&mut self, limit: u64) -> Result<usize, FormatError> {
        let v = self.varint()?;
        if v > limit {
            return Err(FormatError::Corrupt("length field out of range"));
        }
        Ok(v as usize)
    }

    pub fn i32_field(&mut self) -> Result<i32, FormatError> {
        i32::try_from(self.svarint()?).map_err(|_| FormatError::Corrupt("integer out of range"))
    }

    pub fn poly(&mut self) -> Result<TPoly, FormatError> {
        let n = self.len_field(self.buf.len() as u64)?;
        let mut terms = Vec::with_capacity(n);
        let mut last: Option<i32> = None;
        for _ in 0..n {
            let e = self.i32_field()?;
            if last.is_some_and(|l| l >= e) {
                return Err(FormatError::Corrupt("polynomial exponents not increasing"));
            }
            last = Some(e);
            let tag = self.varint()?;
            let c = if tag & 1 == 0 {
                Int::from(unzigzag(tag >> 1))
            } else {
                let len = (tag >> 1) as usize;
                Int::from_signed_bytes_le(self.bytes(len)?)
            };
            if c.is_zero() {
                return Err(FormatError::Corrupt("zero coefficient"));
            }
            terms.push((e, c));
        }
        Ok(TPoly::from_terms(terms))
    }

    pub fn monomial(&mut self) -> Result<Monomial, FormatError> {
        let n = self.len_field(self.buf.len() as u64)?;
        let mut node = 0u64;
        let mut f = Vec::with_capacity(n);
        for _ in 0..n {
            node = node
                .checked_add(self.varint()?)
                .ok_or(FormatError::Corrupt("node out of range"))?;
            if node == 0 || node > u16::MAX as u64 {
                return Err(FormatError::Corrupt("node out of range"));
            }
            let k = self.i32_field()?;
            let e = self.svarint()?;
            if e == 0 || e.abs() > i16::MAX as i64 {
                return Err(FormatError::Corrupt("exponent out of range"));
            }
            f.push((node as usize, k, e as i32));
        }
        let m = Monomial::from_factors(f);
        if m.num_factors() != n {
            return Err(FormatError::Corrupt("monomial not canonical"));
        }
        Ok(m)
    }
}
