//! Monomials in the variables `Y[i,k]` (standing for `Y_{i,q^k}`), the
//! `A[i,k]` lattice action, v-vectors, depth and Drinfeld data.
//!
//! Nodes are 1-based throughout, spectral indices are plain integers.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::root::{DynkinData, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonomialError {
    #[error("cannot parse monomial {0:?}")]
    Parse(String),
    #[error("cannot parse Drinfeld data {0:?}")]
    ParseDrinfeld(String),
    #[error("monomial {0} is not l-dominant")]
    NotDominant(Monomial),
    #[error("node {node} outside 1..={rank}")]
    BadNode { node: usize, rank: usize },
    #[error("exponent overflow")]
    Overflow,
}

/// One factor `Y[node,index]^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct YFactor {
    pub node: u16,
    pub exp: i16,
    pub index: i32,
}

impl YFactor {
    fn key(&self) -> (u16, i32) {
        (self.node, self.index)
    }
}

/// A Laurent monomial in the `Y[i,k]`, canonical: sorted by `(node, index)`,
/// no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Box<[YFactor]>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.factors.iter().map(|f| (f.node, f.index, f.exp));
        let b = other.factors.iter().map(|f| (f.node, f.index, f.exp));
        a.cmp(b)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn y(node: usize, index: i32) -> Self {
        Self::from_factors([(node, index, 1)])
    }

    /// Canonicalizes arbitrary `(node, index, exp)` triples.
    pub fn from_factors<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (usize, i32, i32)>,
    {
        let mut raw: Vec<(u16, i32, i32)> =
            iter.into_iter().map(|(n, k, e)| (n as u16, k, e)).collect();
        raw.sort_unstable_by_key(|&(n, k, _)| (n, k));
        let mut out: Vec<YFactor> = Vec::with_capacity(raw.len());
        let mut acc: Option<(u16, i32, i32)> = None;
        for (n, k, e) in raw {
            match &mut acc {
                Some((an, ak, ae)) if *an == n && *ak == k => *ae += e,
                _ => {
                    if let Some(f) = acc.take() {
                        push_factor(&mut out, f);
                    }
                    acc = Some((n, k, e));
                }
            }
        }
        if let Some(f) = acc {
            push_factor(&mut out, f);
        }
        Monomial { factors: out.into_boxed_slice() }
    }

    pub fn factors(&self) -> &[YFactor] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// `u_{i,k}(m)`.
    pub fn u(&self, node: usize, index: i32) -> i32 {
        match self.factors.binary_search_by_key(&(node as u16, index), YFactor::key) {
            Ok(p) => self.factors[p].exp as i32,
            Err(_) => 0,
        }
    }

    /// Factors at one node, ordered by index.
    pub fn node_factors(&self, node: usize) -> &[YFactor] {
        let n = node as u16;
        let lo = self.factors.partition_point(|f| f.node < n);
        let hi = self.factors.partition_point(|f| f.node <= n);
        &self.factors[lo..hi]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, -1)
    }

    pub fn inverse(&self) -> Monomial {
        let factors = self.factors.iter().map(|f| YFactor { exp: -f.exp, ..*f }).collect();
        Monomial { factors }
    }

    pub fn pow(&self, e: i32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        let factors = self
            .factors
            .iter()
            .map(|f| YFactor { exp: (f.exp as i32 * e) as i16, ..*f })
            .collect();
        Monomial { factors }
    }

    fn combine(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                a[i].key().cmp(&b[j].key())
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(YFactor { exp: (b[j].exp as i32 * sign) as i16, ..b[j] });
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].exp as i32 + sign * b[j].exp as i32;
                    if e != 0 {
                        out.push(YFactor { exp: e as i16, ..a[i] });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial { factors: out.into_boxed_slice() }
    }

    /// Every spectral index shifted by `s`.
    pub fn shift(&self, s: i32) -> Monomial {
        let factors = self.factors.iter().map(|f| YFactor { index: f.index + s, ..*f }).collect();
        Monomial { factors }
    }

    pub fn is_i_dominant(&self, node: usize) -> bool {
        self.node_factors(node).iter().all(|f| f.exp > 0)
    }

    pub fn is_l_dominant(&self) -> bool {
        self.factors.iter().all(|f| f.exp > 0)
    }

    /// `m · A[i,k]^{-r}`.
    pub fn mul_a_inverse(&self, data: &DynkinData, node: usize, index: i32, r: i32) -> Monomial {
        self.mul(&a_monomial(data, node, index).pow(-r))
    }

    /// `Σ u_{i,k}(m) ϖ_i`.
    pub fn weight(&self, rank: usize) -> Weight {
        let mut w = Weight::zero(rank);
        for f in self.factors.iter() {
            w.0[f.node as usize - 1] += f.exp as i32;
        }
        w
    }

    /// Smallest and largest spectral index present.
    pub fn index_range(&self) -> Option<(i32, i32)> {
        let lo = self.factors.iter().map(|f| f.index).min()?;
        let hi = self.factors.iter().map(|f| f.index).max()?;
        Some((lo, hi))
    }

    pub fn max_node(&self) -> usize {
        self.factors.iter().map(|f| f.node as usize).max().unwrap_or(0)
    }
}

fn push_factor(out: &mut Vec<YFactor>, (n, k, e): (u16, i32, i32)) {
    if e != 0 {
        out.push(YFactor { node: n, index: k, exp: e as i16 });
    }
}

/// `A[i,k] = Y[i,k-1] Y[i,k+1] Π_{j~i} Y[j,k]^{-1}`.
pub fn a_monomial(data: &DynkinData, node: usize, index: i32) -> Monomial {
    let mut f: SmallVec<[(usize, i32, i32); 6]> = SmallVec::new();
    f.push((node, index - 1, 1));
    f.push((node, index + 1, 1));
    for j in data.neighbors(node) {
        f.push((j, index, -1));
    }
    Monomial::from_factors(f)
}

/// `weight_of` for a Dynkin datum.
pub fn weight_of(data: &DynkinData, m: &Monomial) -> Weight {
    m.weight(data.rank())
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (n, y) in self.factors.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            write!(f, "Y[{},{}]", y.node, y.index)?;
            if y.exp != 1 {
                write!(f, "^{}", y.exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

impl FromStr for Monomial {
    type Err = MonomialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MonomialError::Parse(s.to_string());
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        if s.is_empty() {
            return Err(bad());
        }
        let mut triples = Vec::new();
        for tok in s.split_whitespace() {
            let rest = tok.strip_prefix("Y[").ok_or_else(bad)?;
            let close = rest.find(']').ok_or_else(bad)?;
            let (inner, tail) = (&rest[..close], &rest[close + 1..]);
            let (n, k) = inner.split_once(',').ok_or_else(bad)?;
            let node: usize = n.trim().parse().map_err(|_| bad())?;
            let index: i32 = k.trim().parse().map_err(|_| bad())?;
            let exp: i32 = if tail.is_empty() {
                1
            } else {
                tail.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
            };
            if node == 0 || node > u16::MAX as usize || exp == 0 {
                return Err(bad());
            }
            triples.push((node, index, exp));
        }
        let m = Monomial::from_factors(triples.iter().copied());
        if m.num_factors() != triples.len() {
            // repeated factors are not canonical text
            return Err(bad());
        }
        Ok(m)
    }
}

/// `v_{i,k}(m, m_P)`: the multiplicities of `A[i,k]^{-1}` relating a
/// monomial to its anchor. Sorted by `(node, index)`, entries positive.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VVector {
    entries: Vec<(u16, i32, u32)>,
}

impl VVector {
    pub fn new() -> Self {
        VVector::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, i32, u32)>>(iter: I) -> Self {
        let mut map: BTreeMap<(u16, i32), u32> = BTreeMap::new();
        for (n, k, m) in iter {
            *map.entry((n as u16, k)).or_default() += m;
        }
        VVector {
            entries: map.into_iter().filter(|&(_, m)| m > 0).map(|((n, k), m)| (n, k, m)).collect(),
        }
    }

    pub fn entries(&self) -> &[(u16, i32, u32)] {
        &self.entries
    }

    pub fn get(&self, node: usize, index: i32) -> u32 {
        match self.entries.binary_search_by_key(&(node as u16, index), |&(n, k, _)| (n, k)) {
            Ok(p) => self.entries[p].2,
            Err(_) => 0,
        }
    }

    pub fn depth(&self) -> u64 {
        self.entries.iter().map(|&(_, _, m)| m as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn add(&mut self, node: usize, index: i32, r: u32) {
        let key = (node as u16, index);
        match self.entries.binary_search_by_key(&key, |&(n, k, _)| (n, k)) {
            Ok(p) => self.entries[p].2 += r,
            Err(p) => self.entries.insert(p, (key.0, key.1, r)),
        }
    }

    /// `Π A[i,k]^{-v_{i,k}}` as a monomial.
    pub fn to_monomial(&self, data: &DynkinData) -> Monomial {
        let mut acc: FxHashMap<(usize, i32), i32> = FxHashMap::default();
        for &(n, k, m) in &self.entries {
            let (n, m) = (n as usize, m as i32);
            *acc.entry((n, k - 1)).or_default() -= m;
            *acc.entry((n, k + 1)).or_default() -= m;
            for j in data.neighbors(n) {
                *acc.entry((j, k)).or_default() += m;
            }
        }
        Monomial::from_factors(acc.into_iter().map(|((n, k), e)| (n, k, e)))
    }

    /// Every spectral index shifted by `s`.
    pub fn shift(&self, s: i32) -> VVector {
        VVector { entries: self.entries.iter().map(|&(n, k, m)| (n, k + s, m)).collect() }
    }
}

impl fmt::Display for VVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("1");
        }
        for (p, &(n, k, m)) in self.entries.iter().enumerate() {
            if p > 0 {
                f.write_str(" ")?;
            }
            write!(f, "A[{n},{k}]")?;
            if m != 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for VVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VVector({self})")
    }
}

/// Recovers the v-vector of `m` relative to `anchor`, i.e. the unique
/// finitely supported `v` with `m = anchor · Π A[i,k]^{-v_{i,k}}`.
/// Returns `None` when `m / anchor` is not such a product with `v ≥ 0`.
pub fn recover_vvector(data: &DynkinData, anchor: &Monomial, m: &Monomial) -> Option<VVector> {
    let w = m.div(anchor);
    let (lo, hi) = match w.index_range() {
        Some(r) => r,
        None => return Some(VVector::new()),
    };
    let rank = data.rank();
    let width = (hi - lo + 3) as usize;
    // v[(k - lo) * rank + i0], with v = 0 for k <= lo
    let mut v = vec![0i64; width * rank];
    let at = |k: i32, i0: usize| (k - lo) as usize * rank + i0;
    for k in lo + 1..=hi + 1 {
        for i0 in 0..rank {
            let node = i0 + 1;
            let mut val = -(w.u(node, k - 1) as i64);
            if k - 2 >= lo {
                val -= v[at(k - 2, i0)];
            }
            for j in data.neighbors(node) {
                val += v[at(k - 1, j - 1)];
            }
            v[at(k, i0)] = val;
        }
    }
    let mut entries = Vec::new();
    for i0 in 0..rank {
        for k in lo + 1..=hi + 1 {
            let x = v[at(k, i0)];
            if x < 0 {
                return None;
            }
            if x > 0 {
                entries.push((i0 + 1, k, u32::try_from(x).ok()?));
            }
        }
    }
    let vv = VVector::from_entries(entries);
    if vv.to_monomial(data) != w {
        return None;
    }
    Some(vv)
}

/// A monomial together with its anchor and v-vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnchoredMonomial {
    anchor: Monomial,
    vvec: VVector,
    monomial: Monomial,
}

impl AnchoredMonomial {
    pub fn at_anchor(anchor: Monomial) -> Self {
        AnchoredMonomial { monomial: anchor.clone(), anchor, vvec: VVector::new() }
    }

    pub fn from_vvector(data: &DynkinData, anchor: Monomial, vvec: VVector) -> Self {
        let monomial = anchor.mul(&vvec.to_monomial(data));
        AnchoredMonomial { anchor, vvec, monomial }
    }

    pub fn recover(data: &DynkinData, anchor: &Monomial, m: &Monomial) -> Option<Self> {
        let vvec = recover_vvector(data, anchor, m)?;
        Some(AnchoredMonomial { anchor: anchor.clone(), vvec, monomial: m.clone() })
    }

    pub fn anchor(&self) -> &Monomial {
        &self.anchor
    }

    pub fn vvec(&self) -> &VVector {
        &self.vvec
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn depth(&self) -> u64 {
        self.vvec.depth()
    }

    pub fn multiply_a_inverse(&self, data: &DynkinData, node: usize, index: i32, r: u32) -> Self {
        let mut vvec = self.vvec.clone();
        vvec.add(node, index, r);
        let monomial = self.monomial.mul_a_inverse(data, node, index, r as i32);
        AnchoredMonomial { anchor: self.anchor.clone(), vvec, monomial }
    }

    /// Recomputes the monomial from anchor and v-vector.
    pub fn reconstruct(&self, data: &DynkinData) -> Monomial {
        self.anchor.mul(&self.vvec.to_monomial(data))
    }
}

/// Drinfeld polynomials on a single q-orbit: per node, the multiset of
/// indices `k` with `P_i(u) = Π (1 - u q^k)`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DrinfeldData {
    roots: BTreeMap<usize, Vec<i32>>,
}

impl DrinfeldData {
    pub fn new() -> Self {
        DrinfeldData::default()
    }

    pub fn single(node: usize, index: i32) -> Self {
        let mut d = DrinfeldData::new();
        d.push(node, index);
        d
    }

    pub fn push(&mut self, node: usize, index: i32) {
        let v = self.roots.entry(node).or_default();
        let p = v.partition_point(|&x| x <= index);
        v.insert(p, index);
    }

    pub fn roots(&self) -> impl Iterator<Item = (usize, &[i32])> {
        self.roots.iter().map(|(n, v)| (*n, v.as_slice()))
    }

    /// All `(node, index)` roots with multiplicity, sorted.
    pub fn root_list(&self) -> Vec<(usize, i32)> {
        self.roots.iter().flat_map(|(n, v)| v.iter().map(move |k| (*n, *k))).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.roots.values().map(Vec::len).sum()
    }

    pub fn to_monomial(&self) -> Monomial {
        Monomial::from_factors(self.root_list().into_iter().map(|(n, k)| (n, k, 1)))
    }

    pub fn from_monomial(m: &Monomial) -> Result<Self, MonomialError> {
        if !m.is_l_dominant() {
            return Err(MonomialError::NotDominant(m.clone()));
        }
        let mut d = DrinfeldData::new();
        for f in m.factors() {
            for _ in 0..f.exp {
                d.push(f.node as usize, f.index);
            }
        }
        Ok(d)
    }

    pub fn shift(&self, s: i32) -> Self {
        DrinfeldData {
            roots: self
                .roots
                .iter()
                .map(|(n, v)| (*n, v.iter().map(|k| k + s).collect()))
                .collect(),
        }
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), MonomialError> {
        match self.roots.keys().find(|&&n| n == 0 || n > rank) {
            Some(&node) => Err(MonomialError::BadNode { node, rank }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for DrinfeldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.root_list().into_iter().map(|(n, k)| format!("{n}:{k}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for DrinfeldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DrinfeldData({self})")
    }
}

impl FromStr for DrinfeldData {
    type Err = MonomialError;

    /// Comma-separated `node:index` tokens; repetition encodes multiplicity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MonomialError::ParseDrinfeld(s.to_string());
        let mut d = DrinfeldData::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let (n, k) = tok.split_once(':').ok_or_else(bad)?;
            let node: usize = n.trim().parse().map_err(|_| bad())?;
            let index: i32 = k.trim().parse().map_err(|_| bad())?;
            if node == 0 {
                return Err(bad());
            }
            d.push(node, index);
        }
        if d.is_empty() {
            return Err(bad());
        }
        Ok(d)
    }
}
