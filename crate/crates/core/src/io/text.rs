//! Line-oriented ASCII forms.
//!
//! A q-character file is a few `#` header lines followed by one
//! `monomial : coefficient` line per term:
//!
//! ```text
//! # type A2
//! # anchor 1:0
//! # normalization qch
//! Y[1,0] : 1
//! Y[1,2]^-1 Y[2,1] : 1
//! Y[2,3]^-1 : 1
//! ```

use std::fmt::Write as _;

use crate::engine::{Normalization, QChar};
use crate::laurent::TPoly;
use crate::monomial::{DrinfeldData, Monomial};
use crate::root::{ClassicalChar, DynkinData, Weight};

use super::TextError;

pub fn qchar_to_text(data: &DynkinData, q: &QChar) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# type {}", data.label());
    let anchor = DrinfeldData::from_monomial(q.anchor()).expect("anchor is l-dominant");
    let anchor = if anchor.is_empty() { "-".to_string() } else { anchor.to_string() };
    let _ = writeln!(out, "# anchor {anchor}");
    let _ = writeln!(out, "# normalization {}", q.norm().as_str());
    for (m, c) in q.terms() {
        let _ = writeln!(out, "{m} : {c}");
    }
    out
}

/// Parses [`qchar_to_text`] output. Returns the Cartan label too.
pub fn qchar_from_text(text: &str) -> Result<(Option<String>, QChar), TextError> {
    let mut label = None;
    let mut anchor = None;
    let mut norm = Normalization::Qch;
    let mut terms = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('#') {
            let h = h.trim();
            if let Some(v) = h.strip_prefix("type ") {
                label = Some(v.trim().to_string());
            } else if let Some(v) = h.strip_prefix("anchor ") {
                let v = v.trim();
                let d = if v == "-" {
                    DrinfeldData::new()
                } else {
                    v.parse::<DrinfeldData>().map_err(|e| TextError::at(line_no, e.to_string()))?
                };
                anchor = Some(d.to_monomial());
            } else if let Some(v) = h.strip_prefix("normalization ") {
                norm = match v.trim() {
                    "qch" => Normalization::Qch,
                    "chi" => Normalization::Chi,
                    other => return Err(TextError::at(line_no, format!("unknown normalization {other:?}"))),
                };
            }
            continue;
        }
        let (m, c) = line
            .split_once(" : ")
            .ok_or_else(|| TextError::at(line_no, "expected `monomial : coefficient`".into()))?;
        let m: Monomial = m.parse().map_err(|e: crate::monomial::MonomialError| TextError::at(line_no, e.to_string()))?;
        let c: TPoly = c.parse().map_err(|e: crate::laurent::ParsePolyError| TextError::at(line_no, e.to_string()))?;
        terms.push((m, c));
    }
    let anchor = match anchor {
        Some(a) => a,
        // without a header the anchor is the unique l-dominant maximum; take
        // the first l-dominant monomial
        None => terms
            .iter()
            .find(|(m, _)| m.is_l_dominant())
            .map(|(m, _)| m.clone())
            .ok_or_else(|| TextError::at(0, "no anchor header and no l-dominant monomial".into()))?,
    };
    Ok((label, QChar::new(anchor, norm, terms)))
}

/// `weight : poly` lines, sorted by weight.
pub fn classical_to_text(ch: &ClassicalChar) -> String {
    let mut out = String::new();
    for (w, p) in ch.iter() {
        let _ = writeln!(out, "{w} : {p}");
    }
    out
}

/// `coords<TAB>poly` lines.
pub fn classical_records(ch: &ClassicalChar) -> String {
    ch.iter().map(|(w, p)| format!("{}\t{}\n", w.coords_string(), p)).collect()
}

/// Parses `coords<TAB>poly` records, as written by [`classical_records`]
/// or [`DecompositionTable::machine_records`](crate::restriction::DecompositionTable::machine_records).
pub fn classical_from_records(text: &str) -> Result<ClassicalChar, TextError> {
    let mut ch = ClassicalChar::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (w, p) = line.split_once('\t').ok_or_else(|| TextError::at(no + 1, "expected a tab".into()))?;
        let w = Weight::parse_coords(w).map_err(|e| TextError::at(no + 1, e.to_string()))?;
        let p: TPoly = p.parse().map_err(|e: crate::laurent::ParsePolyError| TextError::at(no + 1, e.to_string()))?;
        ch.add_term(w, &p);
    }
    Ok(ch)
}
