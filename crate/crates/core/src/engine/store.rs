use crate::io::codec::{put_monomial, put_poly, Reader};
use crate::io::FormatError;
use crate::laurent::TPoly;
use crate::monomial::Monomial;

/// Append-only byte store of finalized `(monomial, coefficient)` records.
///
/// A record is a tag byte (`1` when the coefficient is `1`), the monomial,
/// and the coefficient unless tagged. Typical records take a few bytes per
/// factor instead of a boxed slice plus a polynomial header.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct CompactStore {
    bytes: Vec<u8>,
    count: u64,
    ones: u64,
}

impl CompactStore {
    pub fn new() -> Self {
        CompactStore::default()
    }

    pub fn push(&mut self, m: &Monomial, c: &TPoly) {
        let one = c.is_one();
        self.bytes.push(one as u8);
        put_monomial(&mut self.bytes, m);
        if !one {
            put_poly(&mut self.bytes, c);
        }
        self.count += 1;
        self.ones += one as u64;
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Records whose coefficient is exactly `1`.
    pub fn coefficient_one_count(&self) -> u64 {
        self.ones
    }

    pub fn byte_len(&self) -> usize {
        self.bytes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Monomial, TPoly)> + '_ {
        let mut r = Reader::new(&self.bytes);
        std::iter::from_fn(move || {
            if r.is_empty() {
                return None;
            }
            Some(read_record(&mut r).expect("store bytes are self-written"))
        })
    }
}

fn read_record(r: &mut Reader<'_>) -> Result<(Monomial, TPoly), FormatError> {
    let tag = r.byte()?;
    let m = r.monomial()?;
    let c = if tag == 1 { TPoly::one() } else { r.poly()? };
    Ok((m, c))
}
