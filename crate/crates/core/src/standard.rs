//! The pairing `d`, twisted products of standard modules, and the
//! bar-invariance recursion for simple modules.
//!
//! Standard modules are ordered by the partial order on their l-dominant
//! monomials (`Q ≤ P` iff `Q = P · Π A^{-v}` with `v ≥ 0`); this is our
//! reading of the ordering on Drinfeld polynomials.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::engine::{compute_l_fundamental, EngineError, Normalization, QChar};
use crate::laurent::TPoly;
use crate::monomial::{recover_vvector, DrinfeldData, Monomial, VVector};
use crate::root::DynkinData;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KlError {
    #[error("factor order violates the pairing condition: root {node_a}:{index_a} precedes {node_b}:{index_b}; suggested order {suggested}")]
    OrderViolation { node_a: usize, index_a: i32, node_b: usize, index_b: i32, suggested: String },
    #[error("missing standard module for {0}")]
    MissingStandard(Monomial),
    #[error("no bar-invariant solution (coefficient of {0} not bar-invariant)")]
    NoSolution(Monomial),
    #[error("monomial {0} is not below the anchor {1}")]
    NotBelow(Monomial, Monomial),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// `d(m1, P1; m2, P2) = Σ_{i,k} v_{i,k+1}(m1) u_{i,k}(m2) + u_{i,k+1}(m_{P1}) v_{i,k}(m2)`.
pub fn d_pairing_v(v1: &VVector, m2: &Monomial, anchor1: &Monomial, v2: &VVector) -> i64 {
    let mut d = 0i64;
    for &(n, k, v) in v1.entries() {
        d += v as i64 * m2.u(n as usize, k - 1) as i64;
    }
    for &(n, k, v) in v2.entries() {
        d += anchor1.u(n as usize, k + 1) as i64 * v as i64;
    }
    d
}

/// `d(m1, m_{P1}; m2, m_{P2})`, or `None` if a monomial is not below its anchor.
pub fn d_pairing(
    data: &DynkinData,
    m1: &Monomial,
    anchor1: &Monomial,
    m2: &Monomial,
    anchor2: &Monomial,
) -> Option<i64> {
    let v1 = recover_vvector(data, anchor1, m1)?;
    let v2 = recover_vvector(data, anchor2, m2)?;
    Some(d_pairing_v(&v1, m2, anchor1, &v2))
}

/// `d(m, m_P; m, m_P)`, the exponent relating the two normalizations.
pub fn self_pairing(data: &DynkinData, anchor: &Monomial, m: &Monomial) -> Option<i64> {
    let v = recover_vvector(data, anchor, m)?;
    Some(d_pairing_v(&v, m, anchor, &v))
}

/// Checks that no root `a` of an earlier factor and `b` of a later one
/// have `k_a - k_b ≥ 2`.
pub fn check_order(factors: &[DrinfeldData]) -> Result<(), KlError> {
    for (x, p1) in factors.iter().enumerate() {
        for p2 in &factors[x + 1..] {
            for (na, ka) in p1.root_list() {
                for (nb, kb) in p2.root_list() {
                    if ka - kb >= 2 {
                        return Err(KlError::OrderViolation {
                            node_a: na,
                            index_a: ka,
                            node_b: nb,
                            index_b: kb,
                            suggested: suggest_order(factors)
                                .iter()
                                .map(|d| format!("[{d}]"))
                                .collect::<Vec<_>>()
                                .join(" "),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// A valid order for single-root (or same-index) factors: ascending by
/// smallest root index, ties by node.
pub fn suggest_order(factors: &[DrinfeldData]) -> Vec<DrinfeldData> {
    let mut out = factors.to_vec();
    out.sort_by_key(|d| d.root_list().iter().map(|&(n, k)| (k, n)).min());
    out
}

/// `qch` of the ordered twisted product: the coefficient of `m1 m2`
/// accumulates `t^{2d(m1,P1;m2,P2)} a_{m1} a_{m2}`.
pub fn twisted_product(data: &DynkinData, factors: &[QChar]) -> Result<QChar, KlError> {
    let drinfeld: Vec<DrinfeldData> = factors
        .iter()
        .map(|q| DrinfeldData::from_monomial(q.anchor()).map_err(|_| KlError::NotBelow(q.anchor().clone(), q.anchor().clone())))
        .collect::<Result<_, _>>()?;
    check_order(&drinfeld)?;
    let Some(first) = factors.first() else {
        return Ok(QChar::new(Monomial::one(), Normalization::Qch, vec![(Monomial::one(), TPoly::one())]));
    };
    let mut acc = first.to_qch(data);
    for next in &factors[1..] {
        acc = pair_product(data, &acc, &next.to_qch(data))?;
    }
    Ok(acc)
}

fn with_vvectors(data: &DynkinData, q: &QChar) -> Result<Vec<(Monomial, VVector, TPoly)>, KlError> {
    q.terms()
        .iter()
        .map(|(m, c)| {
            let v = recover_vvector(data, q.anchor(), m)
                .ok_or_else(|| KlError::NotBelow(m.clone(), q.anchor().clone()))?;
            Ok((m.clone(), v, c.clone()))
        })
        .collect()
}

fn pair_product(data: &DynkinData, a: &QChar, b: &QChar) -> Result<QChar, KlError> {
    let ta = with_vvectors(data, a)?;
    let tb = with_vvectors(data, b)?;
    let anchor1 = a.anchor();
    let merged = ta
        .par_iter()
        .fold(FxHashMap::<Monomial, TPoly>::default, |mut acc, (m1, v1, c1)| {
            for (m2, v2, c2) in &tb {
                let d = d_pairing_v(v1, m2, anchor1, v2);
                let c = c1.mul_ref(c2).shift(2 * d as i32);
                *acc.entry(m1.mul(m2)).or_default() += &c;
            }
            acc
        })
        .reduce(FxHashMap::default, |mut x, y| {
            for (m, c) in y {
                *x.entry(m).or_default() += &c;
            }
            x
        });
    Ok(QChar::new(anchor1.mul(b.anchor()), Normalization::Qch, merged.into_iter().collect()))
}

/// `qch(M(Q))`: twisted product of shifted fundamentals, one per root, in
/// ascending index order. Fundamentals are computed once per node.
pub fn standard_module(
    data: &DynkinData,
    q: &DrinfeldData,
    fundamentals: &mut BTreeMap<usize, QChar>,
) -> Result<QChar, KlError> {
    let mut roots = q.root_list();
    roots.sort_by_key(|&(n, k)| (k, n));
    let mut factors = Vec::with_capacity(roots.len());
    for (n, k) in roots {
        if let std::collections::btree_map::Entry::Vacant(e) = fundamentals.entry(n) {
            e.insert(compute_l_fundamental(data, n)?);
        }
        factors.push(fundamentals[&n].shift(k));
    }
    twisted_product(data, &factors)
}

/// Coefficients `a_{PQ}(t)` (nonzero ones, `Q < P`) and `χ_{q,t}(L(P))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlResult {
    pub coefficients: BTreeMap<Monomial, TPoly>,
    pub simple: QChar,
}

impl KlResult {
    pub fn coefficient(&self, q: &Monomial) -> TPoly {
        self.coefficients.get(q).cloned().unwrap_or_default()
    }
}

/// The poset of l-dominant monomials generated from `p` by the standard
/// modules, ordered top-down (by depth below `p`, then monomial).
pub fn dominant_poset(
    data: &DynkinData,
    p: &Monomial,
    standards: &BTreeMap<Monomial, QChar>,
) -> Result<Vec<Monomial>, KlError> {
    let mut seen = BTreeMap::new();
    let mut stack = vec![p.clone()];
    while let Some(q) = stack.pop() {
        if seen.contains_key(&q) {
            continue;
        }
        let depth = recover_vvector(data, p, &q)
            .ok_or_else(|| KlError::NotBelow(q.clone(), p.clone()))?
            .depth();
        let m = standards.get(&q).ok_or_else(|| KlError::MissingStandard(q.clone()))?;
        for (r, _) in m.l_dominant() {
            if !seen.contains_key(r) {
                stack.push(r.clone());
            }
        }
        seen.insert(q, depth);
    }
    let mut order: Vec<(u64, Monomial)> = seen.into_iter().map(|(m, d)| (d, m)).collect();
    order.sort();
    Ok(order.into_iter().map(|(_, m)| m).collect())
}

/// Builds every standard module needed for `p` (fundamentals computed on demand).
pub fn standards_for(data: &DynkinData, p: &DrinfeldData) -> Result<BTreeMap<Monomial, QChar>, KlError> {
    let mut fundamentals = BTreeMap::new();
    let mut out = BTreeMap::new();
    let mut stack = vec![p.to_monomial()];
    while let Some(q) = stack.pop() {
        if out.contains_key(&q) {
            continue;
        }
        let d = DrinfeldData::from_monomial(&q).expect("l-dominant by construction");
        let m = if d.is_empty() {
            QChar::new(Monomial::one(), Normalization::Qch, vec![(Monomial::one(), TPoly::one())])
        } else {
            standard_module(data, &d, &mut fundamentals)?
        };
        for (r, _) in m.l_dominant() {
            stack.push(r.clone());
        }
        out.insert(q, m);
    }
    Ok(out)
}

/// Solves `χ(L(P)) = χ(M(P)) + Σ_{Q<P} a_{PQ} χ(M(Q))` with
/// `a_{PQ} ∈ t^{-1}Z[t^{-1}]` and `χ(L(P))` bar-invariant, by descent on
/// the dominant coefficients from the top of the poset.
pub fn kl_simple(
    data: &DynkinData,
    p: &DrinfeldData,
    standards: &BTreeMap<Monomial, QChar>,
) -> Result<KlResult, KlError> {
    let top = p.to_monomial();
    let poset = dominant_poset(data, &top, standards)?;
    let chi: BTreeMap<&Monomial, QChar> =
        poset.iter().map(|q| (q, standards[q].to_chi(data))).collect();

    let mut y: BTreeMap<Monomial, TPoly> = BTreeMap::new();
    y.insert(top.clone(), TPoly::one());
    for s in poset.iter().skip(1) {
        // b = Σ_{Q above s} y_Q c_Q(s)
        let mut b = TPoly::zero();
        for (q, yq) in &y {
            b += &yq.mul_ref(&chi[q].get(s));
        }
        let mut ys = Vec::new();
        for (e, c) in b.terms() {
            if e > 0 {
                ys.push((-e, c.clone()));
            } else if e < 0 {
                ys.push((e, -c));
            }
        }
        let ys = TPoly::from_terms(ys);
        if !ys.is_zero() {
            y.insert(s.clone(), ys);
        }
    }

    let mut total: FxHashMap<Monomial, TPoly> = FxHashMap::default();
    for (q, yq) in &y {
        for (m, c) in chi[q].terms() {
            *total.entry(m.clone()).or_default() += &yq.mul_ref(c);
        }
    }
    let simple = QChar::new(top.clone(), Normalization::Chi, total.into_iter().collect());
    if let Some((m, _)) = simple.terms().iter().find(|(_, c)| !c.is_bar_invariant()) {
        return Err(KlError::NoSolution(m.clone()));
    }
    y.remove(&top);
    Ok(KlResult { coefficients: y, simple })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root::DynkinKind;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn pairing_examples() {
        let a1 = DynkinData::new(DynkinKind::A, 1).unwrap();
        let y0 = m("Y[1,0]");
        let y2 = m("Y[1,2]");
        assert_eq!(d_pairing(&a1, &y0, &y0, &y2, &y2), Some(0));
        assert_eq!(d_pairing(&a1, &y2, &y2, &m("Y[1,2]^-1"), &y0), Some(1));
        let kr = m("Y[1,0] Y[1,2]");
        assert_eq!(d_pairing(&a1, &Monomial::one(), &kr, &Monomial::one(), &kr), Some(1));
        assert_eq!(self_pairing(&a1, &kr, &Monomial::one()), Some(1));
        assert_eq!(self_pairing(&a1, &y0, &m("Y[1,2]^-1")), Some(0));
    }
}
