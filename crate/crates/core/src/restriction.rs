//! Restriction to the classical weight lattice: `ch_t`, decomposition into
//! irreducible characters, the `Q_λ` recipe and the matrices `P(t)`, `IC(t)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::engine::{Engine, EngineConfig, EngineError, Mode, QChar};
use crate::int::Int;
use crate::laurent::TPoly;
use crate::monomial::DrinfeldData;
use crate::root::{ClassicalChar, DynkinData, RootError, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RestrictionError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("character is not Weyl-invariant: {0}")]
    NonInvariant(String),
    #[error("dominant weight {found} occurs for {row} but is not in the weight list")]
    NotClosed { row: Weight, found: Weight },
    #[error("P(0) is not unitriangular in the given order at ({0}, {1})")]
    NotUnitriangular(Weight, Weight),
    #[error("t -> 0 specialization of ch_t L(Q_{0}) differs from the classical character")]
    CrossCheckFailed(Weight),
}

/// `Y[i,k] -> y_i` applied to `qch_{q,t}` (converted first if needed).
pub fn restrict(data: &DynkinData, q: &QChar) -> ClassicalChar {
    q.to_qch(data).restrict_raw(data)
}

/// Multiplicities `M(P, λ, t)` of irreducible characters, in peeling order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DecompositionTable {
    rows: Vec<(Weight, TPoly)>,
}

impl DecompositionTable {
    pub fn rows(&self) -> &[(Weight, TPoly)] {
        &self.rows
    }

    pub fn get(&self, w: &Weight) -> TPoly {
        self.rows.iter().find(|(x, _)| x == w).map(|(_, p)| p.clone()).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn as_map(&self) -> BTreeMap<Weight, TPoly> {
        self.rows.iter().cloned().collect()
    }

    /// True when every entry lies in `Z[t]`.
    pub fn is_polynomial(&self) -> bool {
        self.rows.iter().all(|(_, p)| p.min_exp().is_none_or(|e| e >= 0))
    }

    /// `Σ_λ M(P,λ,1) dim V(λ)`.
    pub fn dimension(&self, data: &DynkinData) -> Result<Int, RootError> {
        let mut total = Int::ZERO;
        for (w, p) in &self.rows {
            let dim: num_bigint::BigInt = data.weyl_dim(w)?.into();
            total = total + p.eval_one() * Int::from(dim);
        }
        Ok(total)
    }

    /// One `coords<TAB>poly` line per row.
    pub fn machine_records(&self) -> String {
        self.rows.iter().map(|(w, p)| format!("{}\t{}\n", w.coords_string(), p)).collect()
    }
}

impl fmt::Display for DecompositionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, p) in &self.rows {
            writeln!(f, "{w} : {p}")?;
        }
        Ok(())
    }
}

fn peel_order_key(data: &DynkinData, w: &Weight) -> Result<(i64, Weight), RootError> {
    Ok((data.scaled_height(w)?, w.clone()))
}

/// Greedy peeling by irreducible characters, highest weight first (largest
/// height, ties to the lexicographically largest coordinates).
pub fn decompose(data: &DynkinData, ch: &ClassicalChar) -> Result<DecompositionTable, RestrictionError> {
    if !ch.is_weyl_invariant(data) {
        return Err(RestrictionError::NonInvariant("coefficients differ along a reflection".into()));
    }
    let mut residual: BTreeMap<Weight, TPoly> =
        ch.dominant_part().map(|(w, p)| (w.clone(), p.clone())).collect();
    let mut rows = Vec::new();
    while !residual.is_empty() {
        let mut best: Option<(i64, Weight)> = None;
        for w in residual.keys() {
            let key = peel_order_key(data, w)?;
            if best.as_ref().is_none_or(|b| key > *b) {
                best = Some(key);
            }
        }
        let lambda = best.unwrap().1;
        let c = residual[&lambda].clone();
        for (mu, mult) in data.freudenthal_dominant(&lambda)? {
            let entry = residual.entry(mu.clone()).or_default();
            *entry -= &c.scale(&mult);
            if entry.is_zero() {
                residual.remove(&mu);
            }
        }
        if residual.contains_key(&lambda) {
            return Err(RestrictionError::NonInvariant(format!("weight {lambda} did not cancel")));
        }
        rows.push((lambda, c));
    }
    Ok(DecompositionTable { rows })
}

/// Edge orientation used by [`q_for_weight`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Edges point from the smaller node to the larger one.
    #[default]
    Canonical,
    Reversed,
}

/// Height function on the nodes: `m(1) = 0` and `m(i) - m(j) = 1` along
/// every oriented edge `i -> j`.
pub fn height_function(data: &DynkinData, orientation: Orientation) -> Vec<i32> {
    let rank = data.rank();
    let mut m = vec![None; rank + 1];
    m[1] = Some(0i32);
    let mut queue = VecDeque::from([1usize]);
    while let Some(i) = queue.pop_front() {
        let mi = m[i].unwrap();
        for j in data.neighbors(i) {
            if m[j].is_some() {
                continue;
            }
            let forward = (i < j) == (orientation == Orientation::Canonical);
            m[j] = Some(if forward { mi - 1 } else { mi + 1 });
            queue.push_back(j);
        }
    }
    m.into_iter().map(|x| x.unwrap_or(0)).collect()
}

/// `Q_i(u) = (1 - u q^{m(i)})^{<λ, h_i>}`.
pub fn q_for_weight(data: &DynkinData, lambda: &Weight, orientation: Orientation) -> Result<DrinfeldData, RootError> {
    if lambda.rank() != data.rank() {
        return Err(RootError::RankMismatch { expected: data.rank(), got: lambda.rank() });
    }
    if !lambda.is_dominant() {
        return Err(RootError::NotDominant(lambda.clone()));
    }
    let m = height_function(data, orientation);
    let mut q = DrinfeldData::new();
    for (i0, &c) in lambda.0.iter().enumerate() {
        for _ in 0..c {
            q.push(i0 + 1, m[i0 + 1]);
        }
    }
    Ok(q)
}

/// `ch_t L(Q_λ)` together with the tolerant-mode warnings of its run.
#[derive(Clone, Debug)]
pub struct GradedChar {
    pub lambda: Weight,
    pub ch: ClassicalChar,
    pub qchar: QChar,
    pub warnings: usize,
}

/// Runs the engine on `Q_λ` and restricts. In tolerant mode a run that
/// needed the tolerance is accepted only if its `t -> 0` specialization
/// agrees with Freudenthal's character on dominant weights.
pub fn graded_char(
    data: &DynkinData,
    lambda: &Weight,
    config: &EngineConfig,
    orientation: Orientation,
) -> Result<GradedChar, RestrictionError> {
    let q = q_for_weight(data, lambda, orientation)?;
    let engine = Engine::new(data, config.clone())?;
    let outcome = engine.compute(q.to_monomial())?;
    let ch = restrict(data, &outcome.qchar);
    if !outcome.warnings.is_empty() && !t0_matches_freudenthal(data, lambda, &ch)? {
        return Err(RestrictionError::CrossCheckFailed(lambda.clone()));
    }
    Ok(GradedChar { lambda: lambda.clone(), ch, qchar: outcome.qchar, warnings: outcome.warnings.len() })
}

fn t0_matches_freudenthal(data: &DynkinData, lambda: &Weight, ch: &ClassicalChar) -> Result<bool, RootError> {
    let t0: BTreeMap<Weight, TPoly> =
        ch.at_t_zero().dominant_part().map(|(w, p)| (w.clone(), p.clone())).collect();
    let expected: BTreeMap<Weight, TPoly> = data
        .freudenthal_dominant(lambda)?
        .into_iter()
        .map(|(w, m)| (w, TPoly::term(m, 0)))
        .collect();
    Ok(t0 == expected)
}

/// `V(λ)` as the `t -> 0` specialization of `ch_t L(Q_λ)`.
pub fn classical_char_t0(data: &DynkinData, lambda: &Weight, mode: Mode) -> Result<ClassicalChar, RestrictionError> {
    if lambda.is_zero() {
        return Ok(ClassicalChar::from_iter([(lambda.clone(), TPoly::one())]));
    }
    let config = EngineConfig { mode, ..EngineConfig::default() };
    let g = graded_char(data, lambda, &config, Orientation::Canonical)?;
    Ok(g.ch.at_t_zero())
}

/// `P(t)` (rows: dominant coefficients of `ch_t L(Q_λ)`) and
/// `IC(t) = P(t) P(0)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcResult {
    pub weights: Vec<Weight>,
    pub p: Vec<Vec<TPoly>>,
    pub ic: Vec<Vec<TPoly>>,
    /// Off-diagonal `IC` entries with a nonzero constant term.
    pub constant_term_warnings: Vec<(Weight, Weight)>,
    /// Rows whose engine run needed tolerant mode (and passed the cross-check).
    pub tolerant_rows: Vec<Weight>,
}

pub fn ic_matrix(
    data: &DynkinData,
    weights: &[Weight],
    config: &EngineConfig,
) -> Result<IcResult, RestrictionError> {
    let n = weights.len();
    let mut p = Vec::with_capacity(n);
    let mut tolerant_rows = Vec::new();
    for lambda in weights {
        let ch = if lambda.is_zero() {
            ClassicalChar::from_iter([(lambda.clone(), TPoly::one())])
        } else {
            let g = graded_char(data, lambda, config, Orientation::Canonical)?;
            if g.warnings > 0 {
                tolerant_rows.push(lambda.clone());
            }
            g.ch
        };
        for (w, _) in ch.dominant_part() {
            if !weights.contains(w) {
                return Err(RestrictionError::NotClosed { row: lambda.clone(), found: w.clone() });
            }
        }
        p.push(weights.iter().map(|w| ch.get(w)).collect::<Vec<_>>());
    }
    ic_from_p(weights, p, tolerant_rows)
}

/// The linear-algebra half of [`ic_matrix`], on a given `P(t)`.
pub fn ic_from_p(weights: &[Weight], p: Vec<Vec<TPoly>>, tolerant_rows: Vec<Weight>) -> Result<IcResult, RestrictionError> {
    let n = weights.len();
    let p0: Vec<Vec<Int>> = p.iter().map(|row| row.iter().map(|x| x.constant_term()).collect()).collect();
    for i in 0..n {
        for j in 0..=i {
            let want = if i == j { Int::ONE } else { Int::ZERO };
            if p0[i][j] != want {
                return Err(RestrictionError::NotUnitriangular(weights[i].clone(), weights[j].clone()));
            }
        }
    }
    // inverse of the upper unitriangular P(0), column by column
    let mut inv = vec![vec![Int::ZERO; n]; n];
    for j in 0..n {
        inv[j][j] = Int::ONE;
        for i in (0..j).rev() {
            let mut s = Int::ZERO;
            for k in i + 1..=j {
                s = s + &p0[i][k] * &inv[k][j];
            }
            inv[i][j] = -s;
        }
    }
    let mut ic = vec![vec![TPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = TPoly::zero();
            for k in 0..n {
                if !inv[k][j].is_zero() {
                    acc += &p[i][k].scale(&inv[k][j]);
                }
            }
            ic[i][j] = acc;
        }
    }
    let mut constant_term_warnings = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !ic[i][j].constant_term().is_zero() {
                log::warn!("IC entry ({}, {}) has a nonzero constant term", weights[i], weights[j]);
                constant_term_warnings.push((weights[i].clone(), weights[j].clone()));
            }
        }
    }
    Ok(IcResult { weights: weights.to_vec(), p, ic, constant_term_warnings, tolerant_rows })
}

/// Aligned text rendering of a labelled square matrix.
pub fn render_matrix(weights: &[Weight], rows: &[Vec<TPoly>]) -> String {
    let labels: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|p| p.to_string()).collect()).collect();
    let lw = labels.iter().map(String::len).max().unwrap_or(0);
    let cw: Vec<usize> = (0..weights.len())
        .map(|j| cells.iter().map(|r| r[j].len()).chain([labels[j].len()]).max().unwrap_or(1))
        .collect();
    let mut out = format!("{:lw$}", "");
    for (j, l) in labels.iter().enumerate() {
        out += &format!(" | {:<w$}", l, w = cw[j]);
    }
    out.push('\n');
    for (i, r) in cells.iter().enumerate() {
        out += &format!("{:<lw$}", labels[i]);
        for (j, c) in r.iter().enumerate() {
            out += &format!(" | {:<w$}", c, w = cw[j]);
        }
        out.push('\n');
    }
    out
}

/// One line per row: the row weight's coordinates, then tab-separated entries.
pub fn matrix_records(weights: &[Weight], rows: &[Vec<TPoly>]) -> String {
    let mut out = String::new();
    for (w, r) in weights.iter().zip(rows) {
        out += &w.coords_string();
        for p in r {
            out.push('\t');
            out += &p.to_string();
        }
        out.push('\n');
    }
    out
}
