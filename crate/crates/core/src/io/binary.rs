//! The versioned binary format (`QCHT`).
//!
//! Layout (integers little-endian, `varint` = LEB128, `svarint` = zigzag):
//!
//! ```text
//! magic "QCHT" | version u16 | flags u16
//! cartan: kind u8, rank varint [, edge count varint, edges as varint pairs]
//! anchor: root count varint, (node varint, index svarint)*
//! per-node index base: rank × svarint
//! record count u64
//! records
//! [checkpoint section]
//! ```
//!
//! A record is a v-vector of triples `(node, index, multiplicity)` and a
//! coefficient. A triple is packed into one `u16` as
//! `node << 12 | offset << 4 | mult` when `node ≤ 15`, `offset ≤ 255` and
//! `mult ≤ 15`, where `offset = index - base[node]` (halved when the parity
//! flag is set); otherwise the whole record is written wide with varints.
//!
//! Record tag bits: 0 = wide, 1 = coefficient is `1` (no polynomial
//! follows). In tree mode records are sorted by their triple sequence and
//! each starts with the number of leading triples shared with the previous
//! record, so common prefixes are stored once.

use crate::engine::{Colors, CompactStore, EngineState, Normalization, QChar};
use crate::laurent::TPoly;
use crate::monomial::{recover_vvector, Monomial, VVector};
use crate::root::{DynkinData, DynkinKind};

use super::codec::{put_monomial, put_poly, put_svarint, put_varint, Reader};
use super::FormatError;

pub const MAGIC: &[u8; 4] = b"QCHT";
pub const VERSION: u16 = 1;

const FLAG_TREE: u16 = 1;
const FLAG_CHECKPOINT: u16 = 2;
const FLAG_CHI: u16 = 4;
const FLAG_PARITY: u16 = 8;

const TAG_WIDE: u8 = 1;
const TAG_ONE: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Layout {
    #[default]
    Tree,
    Flat,
}

type Triple = (u16, i32, u32);

struct Encoder {
    base: Vec<i32>,
    halve: bool,
}

impl Encoder {
    fn new(rank: usize, vvecs: &[&VVector]) -> Self {
        let mut base: Vec<Option<i32>> = vec![None; rank + 1];
        for v in vvecs {
            for &(n, k, _) in v.entries() {
                let b = &mut base[n as usize];
                *b = Some(b.map_or(k, |x| x.min(k)));
            }
        }
        let base: Vec<i32> = base.into_iter().map(|b| b.unwrap_or(0)).collect();
        let halve = vvecs
            .iter()
            .all(|v| v.entries().iter().all(|&(n, k, _)| (k - base[n as usize]) % 2 == 0));
        Encoder { base, halve }
    }

    fn narrow(&self, &(n, k, m): &Triple) -> Option<u16> {
        let mut off = k - self.base[n as usize];
        if self.halve {
            off /= 2;
        }
        if n <= 15 && (0..=255).contains(&off) && m <= 15 {
            Some((n << 12) | ((off as u16) << 4) | m as u16)
        } else {
            None
        }
    }

    fn put_triples(&self, out: &mut Vec<u8>, triples: &[Triple], wide: bool) {
        put_varint(out, triples.len() as u64);
        for t in triples {
            if wide {
                put_varint(out, t.0 as u64);
                put_svarint(out, t.1 as i64);
                put_varint(out, t.2 as u64);
            } else {
                out.extend_from_slice(&self.narrow(t).unwrap().to_le_bytes());
            }
        }
    }
}

struct Decoder {
    base: Vec<i32>,
    halve: bool,
    rank: usize,
}

impl Decoder {
    fn triples(&self, r: &mut Reader<'_>, wide: bool, out: &mut Vec<Triple>) -> Result<(), FormatError> {
        let n = r.len_field(1 << 32)?;
        for _ in 0..n {
            let t = if wide {
                let node = r.varint()?;
                let k = r.i32_field()?;
                let m = r.varint()?;
                if m == 0 || m > u32::MAX as u64 {
                    return Err(FormatError::Corrupt("multiplicity out of range"));
                }
                (node as usize, k, m as u32)
            } else {
                let x = r.u16_le()?;
                let node = (x >> 12) as usize;
                let mut off = ((x >> 4) & 0xff) as i32;
                if self.halve {
                    off *= 2;
                }
                let m = (x & 0xf) as u32;
                if m == 0 {
                    return Err(FormatError::Corrupt("zero multiplicity"));
                }
                if node == 0 || node > self.rank {
                    return Err(FormatError::Corrupt("node out of range"));
                }
                (node, self.base[node] + off, m)
            };
            if t.0 == 0 || t.0 > self.rank {
                return Err(FormatError::Corrupt("node out of range"));
            }
            out.push((t.0 as u16, t.1, t.2));
        }
        Ok(())
    }
}

fn kind_code(k: DynkinKind) -> u8 {
    match k {
        DynkinKind::A => 0,
        DynkinKind::D => 1,
        DynkinKind::E6 => 2,
        DynkinKind::E7 => 3,
        DynkinKind::E8 => 4,
        DynkinKind::Custom => 5,
    }
}

fn put_header(out: &mut Vec<u8>, data: &DynkinData, flags: u16, anchor: &Monomial, enc: &Encoder, count: u64) {
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&flags.to_le_bytes());
    out.push(kind_code(data.kind()));
    put_varint(out, data.rank() as u64);
    if data.kind() == DynkinKind::Custom {
        let edges = data.edges();
        put_varint(out, edges.len() as u64);
        for (a, b) in edges {
            put_varint(out, a as u64);
            put_varint(out, b as u64);
        }
    }
    let roots: Vec<(usize, i32)> = anchor
        .factors()
        .iter()
        .flat_map(|f| std::iter::repeat_n((f.node as usize, f.index), f.exp as usize))
        .collect();
    put_varint(out, roots.len() as u64);
    for (n, k) in roots {
        put_varint(out, n as u64);
        put_svarint(out, k as i64);
    }
    for b in &enc.base[1..] {
        put_svarint(out, *b as i64);
    }
    out.extend_from_slice(&count.to_le_bytes());
}

fn put_records(out: &mut Vec<u8>, enc: &Encoder, records: &[(Vec<Triple>, &TPoly)], layout: Layout) {
    let mut prev: &[Triple] = &[];
    for (triples, c) in records {
        let wide = triples.iter().any(|t| enc.narrow(t).is_none());
        let one = c.is_one();
        out.push((wide as u8 * TAG_WIDE) | (one as u8 * TAG_ONE));
        let suffix = if layout == Layout::Tree {
            let shared = prev.iter().zip(triples.iter()).take_while(|(a, b)| a == b).count();
            put_varint(out, shared as u64);
            &triples[shared..]
        } else {
            &triples[..]
        };
        enc.put_triples(out, suffix, wide);
        if !one {
            put_poly(out, c);
        }
        prev = triples;
    }
}

fn triples_of(v: &VVector) -> Vec<Triple> {
    v.entries().to_vec()
}

fn vvec_records<'a>(
    data: &DynkinData,
    anchor: &Monomial,
    terms: impl Iterator<Item = (&'a Monomial, &'a TPoly)>,
) -> Vec<(VVector, &'a TPoly)> {
    terms
        .map(|(m, c)| (recover_vvector(data, anchor, m).expect("monomial below its anchor"), c))
        .collect()
}

/// Serializes a q-character. Deterministic for canonical input.
pub fn write_qchar(data: &DynkinData, q: &QChar, layout: Layout) -> Vec<u8> {
    let records = vvec_records(data, q.anchor(), q.terms().iter().map(|(m, c)| (m, c)));
    write_body(data, q.anchor(), q.norm(), &records, layout, None)
}

fn write_body(
    data: &DynkinData,
    anchor: &Monomial,
    norm: Normalization,
    records: &[(VVector, &TPoly)],
    layout: Layout,
    checkpoint: Option<&EngineState>,
) -> Vec<u8> {
    let mut vv: Vec<&VVector> = records.iter().map(|(v, _)| v).collect();
    let pending_vv: Vec<(u32, VVector, &Colors)> = checkpoint
        .map(|s| {
            s.pending_sorted()
                .into_iter()
                .map(|(d, m, c)| (d, recover_vvector(data, anchor, m).expect("pending below anchor"), c))
                .collect()
        })
        .unwrap_or_default();
    vv.extend(pending_vv.iter().map(|(_, v, _)| v));
    let enc = Encoder::new(data.rank(), &vv);

    let mut flags = 0;
    if layout == Layout::Tree {
        flags |= FLAG_TREE;
    }
    if checkpoint.is_some() {
        flags |= FLAG_CHECKPOINT;
    }
    if norm == Normalization::Chi {
        flags |= FLAG_CHI;
    }
    if enc.halve {
        flags |= FLAG_PARITY;
    }
    let mut out = Vec::new();
    put_header(&mut out, data, flags, anchor, &enc, records.len() as u64);
    let mut rec: Vec<(Vec<Triple>, &TPoly)> = records.iter().map(|(v, c)| (triples_of(v), *c)).collect();
    if layout == Layout::Tree {
        rec.sort_by(|a, b| a.0.cmp(&b.0));
    }
    put_records(&mut out, &enc, &rec, layout);

    if let Some(state) = checkpoint {
        put_varint(&mut out, state.next_depth() as u64);
        put_varint(&mut out, state.warnings().len() as u64);
        for w in state.warnings() {
            put_monomial(&mut out, w);
        }
        put_varint(&mut out, pending_vv.len() as u64);
        for (d, v, colors) in &pending_vv {
            put_varint(&mut out, *d as u64);
            enc.put_triples(&mut out, &triples_of(v), true);
            put_varint(&mut out, colors.len() as u64);
            for (n, p) in colors.iter() {
                put_varint(&mut out, *n as u64);
                put_poly(&mut out, p);
            }
        }
    }
    out
}

/// What a `QCHT` file contains.
pub struct Parsed {
    pub data: DynkinData,
    pub anchor: Monomial,
    pub norm: Normalization,
    pub layout: Layout,
    pub records: Vec<(Monomial, TPoly)>,
    pub checkpoint: Option<CheckpointSection>,
}

pub struct CheckpointSection {
    pub next_depth: u32,
    pub warnings: Vec<Monomial>,
    pub pending: Vec<(u32, Monomial, Colors)>,
}

pub fn parse(bytes: &[u8]) -> Result<Parsed, FormatError> {
    let mut r = Reader::new(bytes);
    if r.bytes(4).map_err(|_| FormatError::BadMagic)? != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let version = r.u16_le()?;
    if version != VERSION {
        return Err(FormatError::BadVersion(version));
    }
    let flags = r.u16_le()?;
    if flags & !(FLAG_TREE | FLAG_CHECKPOINT | FLAG_CHI | FLAG_PARITY) != 0 {
        return Err(FormatError::Corrupt("unknown flags"));
    }
    let kind = r.byte()?;
    let rank = r.len_field(4096)?;
    let data = match kind {
        0 => DynkinData::new(DynkinKind::A, rank),
        1 => DynkinData::new(DynkinKind::D, rank),
        2 => DynkinData::new(DynkinKind::E6, rank),
        3 => DynkinData::new(DynkinKind::E7, rank),
        4 => DynkinData::new(DynkinKind::E8, rank),
        5 => {
            let n = r.len_field(4096)?;
            let mut edges = Vec::with_capacity(n);
            for _ in 0..n {
                edges.push((r.len_field(4096)?, r.len_field(4096)?));
            }
            DynkinData::from_edges(rank, &edges)
        }
        _ => return Err(FormatError::Corrupt("unknown Cartan kind")),
    }
    .map_err(|_| FormatError::Corrupt("invalid Cartan data"))?;

    let nroots = r.len_field(bytes.len() as u64)?;
    let mut roots = Vec::with_capacity(nroots);
    for _ in 0..nroots {
        let n = r.len_field(rank as u64)?;
        if n == 0 {
            return Err(FormatError::Corrupt("node out of range"));
        }
        roots.push((n, r.i32_field()?, 1));
    }
    let anchor = Monomial::from_factors(roots);
    let mut base = vec![0];
    for _ in 0..rank {
        base.push(r.i32_field()?);
    }
    let dec = Decoder { base, halve: flags & FLAG_PARITY != 0, rank };
    let count = u64::from_le_bytes(r.bytes(8)?.try_into().unwrap());
    let layout = if flags & FLAG_TREE != 0 { Layout::Tree } else { Layout::Flat };

    let mut records = Vec::with_capacity(count.min(1 << 20) as usize);
    let mut prev: Vec<Triple> = Vec::new();
    for _ in 0..count {
        let tag = r.byte()?;
        if tag & !(TAG_WIDE | TAG_ONE) != 0 {
            return Err(FormatError::Corrupt("unknown record tag"));
        }
        let mut triples = Vec::new();
        if layout == Layout::Tree {
            let shared = r.len_field(prev.len() as u64)?;
            triples.extend_from_slice(&prev[..shared]);
        }
        dec.triples(&mut r, tag & TAG_WIDE != 0, &mut triples)?;
        let c = if tag & TAG_ONE != 0 { TPoly::one() } else { r.poly()? };
        let v = VVector::from_entries(triples.iter().map(|&(n, k, m)| (n as usize, k, m)));
        if v.entries() != triples.as_slice() {
            return Err(FormatError::Corrupt("v-vector not canonical"));
        }
        records.push((anchor.mul(&v.to_monomial(&data)), c));
        prev = triples;
    }

    let checkpoint = if flags & FLAG_CHECKPOINT != 0 {
        let next_depth = u32::try_from(r.varint()?).map_err(|_| FormatError::Corrupt("depth"))?;
        let nw = r.len_field(bytes.len() as u64)?;
        let mut warnings = Vec::with_capacity(nw);
        for _ in 0..nw {
            warnings.push(r.monomial()?);
        }
        let np = r.len_field(bytes.len() as u64)?;
        let mut pending = Vec::with_capacity(np);
        for _ in 0..np {
            let d = u32::try_from(r.varint()?).map_err(|_| FormatError::Corrupt("depth"))?;
            let mut triples = Vec::new();
            dec.triples(&mut r, true, &mut triples)?;
            let v = VVector::from_entries(triples.iter().map(|&(n, k, m)| (n as usize, k, m)));
            let nc = r.len_field(rank as u64)?;
            let mut colors = Colors::new();
            for _ in 0..nc {
                let n = r.len_field(rank as u64)? as u16;
                colors.push((n, r.poly()?));
            }
            pending.push((d, anchor.mul(&v.to_monomial(&data)), colors));
        }
        Some(CheckpointSection { next_depth, warnings, pending })
    } else {
        None
    };
    if !r.is_empty() {
        return Err(FormatError::Corrupt("trailing bytes"));
    }
    let norm = if flags & FLAG_CHI != 0 { Normalization::Chi } else { Normalization::Qch };
    Ok(Parsed { data, anchor, norm, layout, records, checkpoint })
}

/// Parses a plain (non-checkpoint) file into its Cartan data and q-character.
pub fn read_qchar(bytes: &[u8]) -> Result<(DynkinData, QChar), FormatError> {
    let p = parse(bytes)?;
    if p.checkpoint.is_some() {
        return Err(FormatError::Corrupt("file is a checkpoint"));
    }
    let n = p.records.len();
    let q = QChar::new(p.anchor, p.norm, p.records);
    if q.len() != n {
        return Err(FormatError::Corrupt("duplicate or zero records"));
    }
    Ok((p.data, q))
}

/// A layer-boundary snapshot of an engine run.
pub fn write_checkpoint(data: &DynkinData, state: &EngineState, layout: Layout) -> Vec<u8> {
    let terms: Vec<(Monomial, TPoly)> = state.finalized().iter().collect();
    let records = vvec_records(data, state.anchor(), terms.iter().map(|(m, c)| (m, c)));
    write_body(data, state.anchor(), Normalization::Qch, &records, layout, Some(state))
}

pub fn read_checkpoint(bytes: &[u8]) -> Result<(DynkinData, EngineState), FormatError> {
    let p = parse(bytes)?;
    let cp = p.checkpoint.ok_or(FormatError::Corrupt("not a checkpoint"))?;
    let mut store = CompactStore::new();
    let mut records = p.records;
    // finalized order inside the store does not matter; keep it canonical
    records.sort_by(|a, b| a.0.cmp(&b.0));
    for (m, c) in &records {
        store.push(m, c);
    }
    let state = EngineState::from_parts(p.anchor, cp.next_depth, store, cp.pending, cp.warnings);
    Ok((p.data, state))
}
