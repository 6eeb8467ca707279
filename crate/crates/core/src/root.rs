//! Simply-laced root data: Cartan matrices, weights, Weyl group actions and
//! classical characters.
//!
//! Nodes are numbered from 1 throughout the public API. The exceptional
//! types use a chain `n-1 - ... - 2 - 1` with node `n` attached to node
//! `n-3`, which for `E8` is the diagram
//!
//! ```text
//! 7 - 6 - 5 - 4 - 3 - 2 - 1
//!         |
//!         8
//! ```
//!
//! Type `D_n` uses the Bourbaki labelling (chain `1 - ... - n-2`, with `n-1`
//! and `n` attached to `n-2`). Weights are always expressed in the basis of
//! fundamental weights.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::int::Int;
use crate::laurent::TPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("invalid Cartan type {0:?}")]
    InvalidType(String),
    #[error("edge ({0}, {1}) is not between distinct nodes in 1..={2}")]
    BadEdge(usize, usize, usize),
    #[error("Dynkin graph is not a tree")]
    NotATree,
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("weight has {got} coordinates, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("operation requires a finite-type Cartan matrix")]
    NotFiniteType,
    #[error("cannot parse weight {0:?}")]
    BadWeight(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynkinKind {
    A,
    D,
    E6,
    E7,
    E8,
    Custom,
}

/// A weight in fundamental-weight coordinates: `coeffs[i-1] = <λ, h_i>`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub Vec<i32>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// The fundamental weight of the 1-based node `i`.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[i - 1] = 1;
        w
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i32) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    /// Parses `"0"`, `"w1"`, `"2w1"`, `"w1+w2"`, `"-w1+3w4"`.
    pub fn parse(s: &str, rank: usize) -> Result<Weight, RootError> {
        let bad = || RootError::BadWeight(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut w = Weight::zero(rank);
        if compact == "0" {
            return Ok(w);
        }
        if compact.is_empty() {
            return Err(bad());
        }
        let bytes = compact.as_bytes();
        let mut start = 0;
        let mut pieces = Vec::new();
        for i in 1..bytes.len() {
            if bytes[i] == b'+' || bytes[i] == b'-' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        pieces.push(&compact[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'+' => (1, &piece[1..]),
                b'-' => (-1, &piece[1..]),
                _ => (1, piece),
            };
            let wpos = body.find('w').ok_or_else(bad)?;
            let coeff: i32 = if wpos == 0 {
                1
            } else {
                body[..wpos].parse().map_err(|_| bad())?
            };
            let node: usize = body[wpos + 1..].parse().map_err(|_| bad())?;
            if node == 0 || node > rank {
                return Err(bad());
            }
            w.0[node - 1] += sign * coeff;
        }
        Ok(w)
    }

    /// Comma-separated coordinates, the machine-record form.
    pub fn coords_string(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_coords(s: &str) -> Result<Weight, RootError> {
        s.split(',')
            .map(|c| c.trim().parse::<i32>())
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
            .map_err(|_| RootError::BadWeight(s.to_string()))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "w{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({self})")
    }
}

/// Cartan data of a simply-laced Dynkin tree.
#[derive(Clone, Debug)]
pub struct DynkinData {
    kind: DynkinKind,
    rank: usize,
    cartan: Vec<Vec<i32>>,
    /// 0-based neighbor lists; public accessors translate to 1-based.
    adjacency: Vec<Vec<usize>>,
    finite: Option<FiniteData>,
}

#[derive(Clone, Debug)]
struct FiniteData {
    /// `det(C)`.
    det: i64,
    /// `det(C) * C^{-1}`, an integer matrix.
    adj: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, sorted by height.
    positive_roots: Vec<Vec<i32>>,
    /// The same roots in fundamental-weight coordinates.
    positive_roots_w: Vec<Weight>,
}

impl DynkinData {
    /// Builds one of the standard types. `kind` must agree with `rank` for
    /// the exceptional types.
    pub fn new(kind: DynkinKind, rank: usize) -> Result<Self, RootError> {
        let invalid = || RootError::InvalidType(format!("{kind:?}{rank}"));
        let mut edges = Vec::new();
        match kind {
            DynkinKind::A => {
                if rank == 0 {
                    return Err(invalid());
                }
                edges.extend((1..rank).map(|i| (i, i + 1)));
            }
            DynkinKind::D => {
                if rank < 4 {
                    return Err(invalid());
                }
                edges.extend((1..rank - 2).map(|i| (i, i + 1)));
                edges.push((rank - 2, rank - 1));
                edges.push((rank - 2, rank));
            }
            DynkinKind::E6 | DynkinKind::E7 | DynkinKind::E8 => {
                let expected = match kind {
                    DynkinKind::E6 => 6,
                    DynkinKind::E7 => 7,
                    _ => 8,
                };
                if rank != expected {
                    return Err(invalid());
                }
                edges.extend((1..rank - 1).map(|i| (i, i + 1)));
                edges.push((rank - 3, rank));
            }
            DynkinKind::Custom => return Err(invalid()),
        }
        Self::build(kind, rank, &edges)
    }

    /// A custom simply-laced tree on nodes `1..=rank`. Affine and indefinite
    /// trees are accepted; finite-type-only operations then report
    /// [`RootError::NotFiniteType`].
    pub fn from_edges(rank: usize, edges: &[(usize, usize)]) -> Result<Self, RootError> {
        Self::build(DynkinKind::Custom, rank, edges)
    }

    /// Reads an adjacency file: one edge `"i j"` per line, 1-based. Blank
    /// lines and `#` comments are ignored; the rank is the largest node seen.
    pub fn from_adjacency_text(text: &str) -> Result<Self, RootError> {
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| RootError::InvalidType(line.to_string()))?;
            if nums.len() != 2 {
                return Err(RootError::InvalidType(line.to_string()));
            }
            edges.push((nums[0], nums[1]));
        }
        let rank = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(1);
        Self::from_edges(rank, &edges)
    }

    fn build(kind: DynkinKind, rank: usize, edges: &[(usize, usize)]) -> Result<Self, RootError> {
        if rank == 0 {
            return Err(RootError::InvalidType("rank 0".into()));
        }
        let mut adjacency = vec![Vec::new(); rank];
        let mut seen = HashSet::new();
        for &(a, b) in edges {
            if a == 0 || b == 0 || a > rank || b > rank || a == b {
                return Err(RootError::BadEdge(a, b, rank));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(RootError::NotATree);
            }
            adjacency[a - 1].push(b - 1);
            adjacency[b - 1].push(a - 1);
        }
        if seen.len() != rank - 1 {
            return Err(RootError::NotATree);
        }
        // n-1 edges plus connectivity means a tree
        let mut visited = vec![false; rank];
        let mut stack = vec![0];
        visited[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !visited[w] {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
        if visited.iter().any(|v| !v) {
            return Err(RootError::NotATree);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let mut cartan = vec![vec![0i32; rank]; rank];
        for i in 0..rank {
            cartan[i][i] = 2;
            for &j in &adjacency[i] {
                cartan[i][j] = -1;
            }
        }
        let finite = if leading_minors_positive(&cartan) {
            Some(FiniteData::new(&cartan))
        } else {
            None
        };
        Ok(DynkinData { kind, rank, cartan, adjacency, finite })
    }

    pub fn kind(&self) -> DynkinKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Short label such as `"E8"`, `"A3"` or `"custom7"`.
    pub fn label(&self) -> String {
        match self.kind {
            DynkinKind::A => format!("A{}", self.rank),
            DynkinKind::D => format!("D{}", self.rank),
            DynkinKind::E6 => "E6".into(),
            DynkinKind::E7 => "E7".into(),
            DynkinKind::E8 => "E8".into(),
            DynkinKind::Custom => format!("custom{}", self.rank),
        }
    }

    /// Entry `c_{ij}` for 1-based nodes.
    pub fn cartan(&self, i: usize, j: usize) -> i32 {
        self.cartan[i - 1][j - 1]
    }

    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    /// 1-based neighbors of the 1-based node `i`.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i - 1].iter().map(|j| j + 1)
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rank {
            for &j in &self.adjacency[i] {
                if i < j {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn is_finite_type(&self) -> bool {
        self.finite.is_some()
    }

    fn fin(&self) -> Result<&FiniteData, RootError> {
        self.finite.as_ref().ok_or(RootError::NotFiniteType)
    }

    fn check_rank(&self, w: &Weight) -> Result<(), RootError> {
        if w.rank() != self.rank {
            return Err(RootError::RankMismatch { expected: self.rank, got: w.rank() });
        }
        Ok(())
    }

    /// The simple root `α_i` in fundamental-weight coordinates (row `i` of `C`).
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight(self.cartan[i - 1].clone())
    }

    /// Positive roots in simple-root coordinates, ordered by height.
    pub fn positive_roots(&self) -> Result<&[Vec<i32>], RootError> {
        Ok(&self.fin()?.positive_roots)
    }

    pub fn determinant(&self) -> Result<i64, RootError> {
        Ok(self.fin()?.det)
    }

    /// Simple-root coordinates of a weight, as exact rationals.
    pub fn root_coords(&self, w: &Weight) -> Result<Vec<BigRational>, RootError> {
        self.check_rank(w)?;
        let fin = self.fin()?;
        Ok(fin
            .apply_adj(w)
            .into_iter()
            .map(|x| BigRational::new(x.into(), fin.det.into()))
            .collect())
    }

    /// `det(C)` times the height of `w` (sum of its simple-root coordinates).
    pub fn scaled_height(&self, w: &Weight) -> Result<i64, RootError> {
        self.check_rank(w)?;
        Ok(self.fin()?.apply_adj(w).iter().sum())
    }

    /// `det(C)` times the invariant inner product `(x | y)`.
    pub fn scaled_inner(&self, x: &Weight, y: &Weight) -> Result<i64, RootError> {
        self.check_rank(x)?;
        self.check_rank(y)?;
        let ax = self.fin()?.apply_adj(x);
        Ok(ax.iter().zip(&y.0).map(|(a, b)| a * *b as i64).sum())
    }

    /// Simple reflection `s_i` (1-based).
    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        let c = w.0[i - 1];
        if c == 0 {
            return w.clone();
        }
        Weight(w.0.iter().zip(&self.cartan[i - 1]).map(|(x, a)| x - c * a).collect())
    }

    /// The dominant weight in the Weyl orbit of `w`, by reflection descent.
    pub fn dominant_representative(&self, w: &Weight) -> Result<Weight, RootError> {
        self.check_rank(w)?;
        self.fin()?;
        let mut cur = w.0.clone();
        while let Some(i) = cur.iter().position(|&c| c < 0) {
            let c = cur[i];
            for (x, a) in cur.iter_mut().zip(&self.cartan[i]) {
                *x -= c * a;
            }
        }
        Ok(Weight(cur))
    }

    /// All weights in the Weyl orbit of `w`. Only use on small orbits.
    pub fn weyl_orbit(&self, w: &Weight) -> Result<Vec<Weight>, RootError> {
        let start = self.dominant_representative(w)?;
        let mut seen = HashSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(cur) = queue.pop_front() {
            for i in 1..=self.rank {
                // descend from the dominant element only along positive coordinates
                if cur.0[i - 1] > 0 {
                    let next = self.reflect(&cur, i);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
            out.push(cur);
        }
        out.sort();
        Ok(out)
    }

    /// Dimension of the irreducible representation `V(λ)` (Weyl dimension formula).
    pub fn weyl_dim(&self, lambda: &Weight) -> Result<BigUint, RootError> {
        self.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(RootError::NotDominant(lambda.clone()));
        }
        let fin = self.fin()?;
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for root in &fin.positive_roots {
            let h: i64 = root.iter().map(|&c| c as i64).sum();
            let shifted: i64 = root
                .iter()
                .zip(&lambda.0)
                .map(|(&c, &l)| c as i64 * (l as i64 + 1))
                .sum();
            num *= BigUint::from(shifted as u64);
            den *= BigUint::from(h as u64);
        }
        Ok(num / den)
    }

    /// Dominant weights `μ ≤ λ` with their multiplicities in `V(λ)`, computed
    /// by Freudenthal's recursion. Sorted by decreasing height.
    pub fn freudenthal_dominant(&self, lambda: &Weight) -> Result<Vec<(Weight, Int)>, RootError> {
        self.check_rank(lambda)?;
        if !lambda.is_dominant() {
            return Err(RootError::NotDominant(lambda.clone()));
        }
        let fin = self.fin()?;

        let mut weights = vec![lambda.clone()];
        let mut index: HashMap<Weight, usize> = HashMap::from([(lambda.clone(), 0)]);
        let mut cursor = 0;
        while cursor < weights.len() {
            let mu = weights[cursor].clone();
            cursor += 1;
            for alpha in &fin.positive_roots_w {
                let next = mu.sub(alpha);
                if next.is_dominant() && !index.contains_key(&next) {
                    index.insert(next.clone(), weights.len());
                    weights.push(next);
                }
            }
        }
        let mut keyed: Vec<(i64, Weight)> = weights
            .into_iter()
            .map(|w| (fin.apply_adj(&w).iter().sum::<i64>(), w))
            .collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let weights: Vec<Weight> = keyed.into_iter().map(|(_, w)| w).collect();
        let index: HashMap<&Weight, usize> = weights.iter().enumerate().map(|(i, w)| (w, i)).collect();

        let rho = Weight(vec![1; self.rank]);
        let norm = |w: &Weight| -> i64 {
            let s = w.add(&rho);
            fin.apply_adj(&s).iter().zip(&s.0).map(|(a, b)| a * *b as i64).sum()
        };
        let top = norm(lambda);
        let mut mult: Vec<i128> = vec![0; weights.len()];
        mult[0] = 1;
        for idx in 1..weights.len() {
            let mu = &weights[idx];
            let mut acc: i128 = 0;
            for (root, alpha) in fin.positive_roots.iter().zip(&fin.positive_roots_w) {
                let pair: i64 = root.iter().zip(&mu.0).map(|(&c, &m)| c as i64 * m as i64).sum();
                let mut k = 1i64;
                let mut cur = mu.add(alpha);
                loop {
                    let dom = self.dominant_representative(&cur)?;
                    let Some(&j) = index.get(&dom) else { break };
                    acc += (pair + 2 * k) as i128 * mult[j];
                    k += 1;
                    cur = cur.add(alpha);
                }
            }
            let den = (top - norm(mu)) as i128;
            let num = 2 * acc * fin.det as i128;
            debug_assert!(den > 0 && num % den == 0);
            mult[idx] = num / den;
        }
        Ok(weights
            .into_iter()
            .zip(mult)
            .filter(|(_, m)| *m != 0)
            .map(|(w, m)| (w, Int::from(num_bigint::BigInt::from(m))))
            .collect())
    }

    /// The full character of `V(λ)`: every weight with its multiplicity.
    pub fn freudenthal_char(&self, lambda: &Weight) -> Result<ClassicalChar, RootError> {
        let mut ch = ClassicalChar::new();
        for (mu, m) in self.freudenthal_dominant(lambda)? {
            for w in self.weyl_orbit(&mu)? {
                ch.add_term(w, &TPoly::term(m.clone(), 0));
            }
        }
        Ok(ch)
    }
}

impl FromStr for DynkinData {
    type Err = RootError;

    /// Accepts `"A5"`, `"D4"`, `"E6"`, `"E7"`, `"E8"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let invalid = || RootError::InvalidType(s.to_string());
        let (head, tail) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).ok_or_else(invalid)?);
        let rank: usize = tail.parse().map_err(|_| invalid())?;
        let kind = match (head.to_ascii_uppercase().as_str(), rank) {
            ("A", _) => DynkinKind::A,
            ("D", _) => DynkinKind::D,
            ("E", 6) => DynkinKind::E6,
            ("E", 7) => DynkinKind::E7,
            ("E", 8) => DynkinKind::E8,
            _ => return Err(invalid()),
        };
        DynkinData::new(kind, rank)
    }
}

impl FiniteData {
    fn new(cartan: &[Vec<i32>]) -> Self {
        let n = cartan.len();
        let det = bareiss_det(cartan);
        let inv = rational_inverse(cartan);
        let adj: Vec<Vec<i64>> = inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let scaled = x * BigRational::from_integer(det.into());
                        debug_assert!(scaled.is_integer());
                        scaled.to_integer().to_i64().expect("adjugate entry fits i64")
                    })
                    .collect()
            })
            .collect();

        // simply-laced: β + α_j is a root iff (β, α_j) = -1 for β ≠ α_j
        let mut roots: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        let mut known: HashSet<Vec<i32>> = roots.iter().cloned().collect();
        let mut cursor = 0;
        while cursor < roots.len() {
            let beta = roots[cursor].clone();
            cursor += 1;
            for j in 0..n {
                let pairing: i32 = (0..n).map(|i| beta[i] * cartan[i][j]).sum();
                if pairing == -1 {
                    let mut next = beta.clone();
                    next[j] += 1;
                    if known.insert(next.clone()) {
                        roots.push(next);
                    }
                }
            }
        }
        roots.sort_by_key(|r| (r.iter().sum::<i32>(), r.clone()));
        let positive_roots_w = roots
            .iter()
            .map(|r| Weight((0..n).map(|j| (0..n).map(|i| r[i] * cartan[i][j]).sum()).collect()))
            .collect();
        FiniteData { det, adj, positive_roots: roots, positive_roots_w }
    }

    fn apply_adj(&self, w: &Weight) -> Vec<i64> {
        self.adj
            .iter()
            .map(|row| row.iter().zip(&w.0).map(|(a, b)| a * *b as i64).sum())
            .collect()
    }
}

fn bareiss_det(m: &[Vec<i32>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut prev: i128 = 1;
    let mut sign = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

fn leading_minors_positive(m: &[Vec<i32>]) -> bool {
    (1..=m.len()).all(|k| {
        let sub: Vec<Vec<i32>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        bareiss_det(&sub) > 0
    })
}

fn rational_inverse(m: &[Vec<i32>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible Cartan matrix");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// A `t`-graded classical character: weight → polynomial, zero entries absent.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ClassicalChar {
    terms: BTreeMap<Weight, TPoly>,
}

impl ClassicalChar {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, w: Weight, c: &TPoly) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, w: &Weight) -> TPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &TPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dominant_part(&self) -> impl Iterator<Item = (&Weight, &TPoly)> {
        self.terms.iter().filter(|(w, _)| w.is_dominant())
    }

    /// Sum of all coefficients at `t = 1`.
    pub fn mass_at_one(&self) -> Int {
        self.terms.values().fold(Int::ZERO, |acc, p| acc + p.eval_one())
    }

    /// Keeps only constant terms (the `t → 0` specialization).
    pub fn at_t_zero(&self) -> ClassicalChar {
        let mut out = ClassicalChar::new();
        for (w, p) in &self.terms {
            out.add_term(w.clone(), &TPoly::term(p.constant_term(), 0));
        }
        out
    }

    /// Checks `coeff(μ) = coeff(s_i μ)` for every stored weight and simple reflection.
    pub fn is_weyl_invariant(&self, data: &DynkinData) -> bool {
        self.terms.iter().all(|(w, p)| {
            (1..=data.rank()).all(|i| {
                let r = data.reflect(w, i);
                self.terms.get(&r).is_some_and(|q| q == p)
            })
        })
    }
}

impl FromIterator<(Weight, TPoly)> for ClassicalChar {
    fn from_iter<I: IntoIterator<Item = (Weight, TPoly)>>(iter: I) -> Self {
        let mut ch = ClassicalChar::new();
        for (w, p) in iter {
            ch.add_term(w, &p);
        }
        ch
    }
}
