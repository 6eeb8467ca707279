use std::collections::BTreeSet;

use crate::int::Int;
use crate::laurent::TPoly;
use crate::monomial::{recover_vvector, Monomial, VVector};
use crate::root::{ClassicalChar, DynkinData};
use crate::standard::self_pairing;

/// Which coefficient convention a [`QChar`] carries.
///
/// `Qch` coefficients equal `t^{d(m,m_P;m,m_P)}` times the `Chi` ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    Qch,
    Chi,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::Qch => "qch",
            Normalization::Chi => "chi",
        }
    }
}

/// A t-analog of a q-character: nonzero coefficients on monomials, sorted
/// by monomial, relative to an l-dominant anchor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QChar {
    anchor: Monomial,
    norm: Normalization,
    terms: Vec<(Monomial, TPoly)>,
}

impl QChar {
    /// Canonicalizes: merges repeated monomials, drops zeros, sorts.
    pub fn new(anchor: Monomial, norm: Normalization, terms: Vec<(Monomial, TPoly)>) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Monomial, TPoly)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        QChar { anchor, norm, terms: out }
    }

    pub fn anchor(&self) -> &Monomial {
        &self.anchor
    }

    pub fn norm(&self) -> Normalization {
        self.norm
    }

    pub fn terms(&self) -> &[(Monomial, TPoly)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, TPoly)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, m: &Monomial) -> TPoly {
        match self.terms.binary_search_by(|(x, _)| x.cmp(m)) {
            Ok(p) => self.terms[p].1.clone(),
            Err(_) => TPoly::zero(),
        }
    }

    pub fn monomials(&self) -> BTreeSet<Monomial> {
        self.terms.iter().map(|(m, _)| m.clone()).collect()
    }

    /// `Σ_m a_m(1)`.
    pub fn mass_at_one(&self) -> Int {
        self.terms.iter().fold(Int::ZERO, |acc, (_, c)| acc + c.eval_one())
    }

    pub fn l_dominant(&self) -> impl Iterator<Item = &(Monomial, TPoly)> {
        self.terms.iter().filter(|(m, _)| m.is_l_dominant())
    }

    pub fn vvector(&self, data: &DynkinData, m: &Monomial) -> Option<VVector> {
        recover_vvector(data, &self.anchor, m)
    }

    pub fn max_depth(&self, data: &DynkinData) -> u64 {
        self.terms
            .iter()
            .filter_map(|(m, _)| self.vvector(data, m))
            .map(|v| v.depth())
            .max()
            .unwrap_or(0)
    }

    /// Every spectral index (anchor included) shifted by `s`.
    pub fn shift(&self, s: i32) -> QChar {
        let mut terms: Vec<_> = self.terms.iter().map(|(m, c)| (m.shift(s), c.clone())).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        QChar { anchor: self.anchor.shift(s), norm: self.norm, terms }
    }

    fn twist(&self, data: &DynkinData, sign: i32, norm: Normalization) -> QChar {
        if self.norm == norm {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let d = self_pairing(data, &self.anchor, m)
                    .expect("monomial is not below its anchor");
                (m.clone(), c.shift(sign * d as i32))
            })
            .collect();
        QChar { anchor: self.anchor.clone(), norm, terms }
    }

    /// Converts to the `qch` convention (no-op if already there).
    pub fn to_qch(&self, data: &DynkinData) -> QChar {
        self.twist(data, 1, Normalization::Qch)
    }

    /// Converts to the `χ` convention (no-op if already there).
    pub fn to_chi(&self, data: &DynkinData) -> QChar {
        self.twist(data, -1, Normalization::Chi)
    }

    /// Specializes `Y[i,k] -> y_i` (in the current normalization).
    pub fn restrict_raw(&self, data: &DynkinData) -> ClassicalChar {
        let mut ch = ClassicalChar::new();
        for (m, c) in &self.terms {
            ch.add_term(m.weight(data.rank()), c);
        }
        ch
    }

    pub fn map_coeffs(&self, f: impl Fn(&Monomial, &TPoly) -> TPoly) -> QChar {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))).collect();
        QChar::new(self.anchor.clone(), self.norm, terms)
    }
}
