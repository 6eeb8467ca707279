//! Depth-layered computation of t-analogs of q-characters.
//!
//! Monomials are processed in layers of equal depth below the anchor. A
//! layer is finalized only once every shallower layer has been expanded,
//! because all contributions to a monomial come from strictly above it.
//! Finalization reads the coefficient off the colorings of non-dominant
//! directions (which must agree); expansion then pushes
//! `(a_m - a_{m,i}) E_i(m)` into the colorings of deeper monomials for
//! every direction `i` in which `m` is dominant.

mod expand;
mod qchar;
mod store;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::laurent::TPoly;
use crate::mem;
use crate::monomial::{DrinfeldData, Monomial};
use crate::root::DynkinData;

pub use expand::{expand_i, Contribution};
pub use qchar::{Normalization, QChar};
pub use store::CompactStore;

pub const DEFAULT_MAX_DEPTH: u32 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("the algorithm fails at {monomial}: colorings {colorings}")]
    AlgorithmFailed { monomial: Monomial, colorings: String },
    #[error("the algorithm stops at l-dominant monomial {0}")]
    AlgorithmStopped(Monomial),
    #[error("depth guard exceeded: pending monomials at depth {0}")]
    DepthGuardExceeded(u32),
    #[error("monomial {monomial} is not {node}-dominant")]
    NotIDominant { monomial: Monomial, node: usize },
    #[error("anchor {0} is not l-dominant")]
    AnchorNotDominant(Monomial),
    #[error("node {node} outside 1..={rank}")]
    BadNode { node: usize, rank: usize },
    #[error("empty Drinfeld data")]
    EmptyDrinfeld,
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

/// How a non-anchor l-dominant monomial is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Raise [`EngineError::AlgorithmStopped`].
    #[default]
    Strict,
    /// Set its coefficient to zero, record a warning and carry on.
    Tolerant,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    /// Worker threads; `0` lets the pool decide.
    pub threads: usize,
    pub max_depth: u32,
    pub mode: Mode,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { threads: 0, max_depth: DEFAULT_MAX_DEPTH, mode: Mode::Strict }
    }
}

/// Per-node partial coefficients `a_{m,i}`, sparse and sorted by node.
pub type Colors = SmallVec<[(u16, TPoly); 2]>;

fn add_color(colors: &mut Colors, node: u16, p: &TPoly) {
    match colors.binary_search_by_key(&node, |(n, _)| *n) {
        Ok(i) => {
            colors[i].1 += p;
            if colors[i].1.is_zero() {
                colors.remove(i);
            }
        }
        Err(i) => colors.insert(i, (node, p.clone())),
    }
}

fn color_of(colors: &Colors, node: u16) -> TPoly {
    match colors.binary_search_by_key(&node, |(n, _)| *n) {
        Ok(i) => colors[i].1.clone(),
        Err(_) => TPoly::zero(),
    }
}

type Pending = BTreeMap<u32, FxHashMap<Monomial, Colors>>;

fn merge_pending(into: &mut Pending, from: Pending) {
    for (d, layer) in from {
        let target = into.entry(d).or_default();
        if target.is_empty() {
            *target = layer;
            continue;
        }
        for (m, colors) in layer {
            match target.get_mut(&m) {
                Some(existing) => {
                    for (n, p) in &colors {
                        add_color(existing, *n, p);
                    }
                }
                None => {
                    target.insert(m, colors);
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerStats {
    pub depth: u32,
    /// Monomials finalized in this layer (including zero coefficients).
    pub layer_size: usize,
    /// Of those, with nonzero coefficient.
    pub nonzero: usize,
    /// Pending monomials at deeper layers after the expansion.
    pub pending: usize,
    /// Nonzero monomials finalized so far.
    pub total: u64,
    pub elapsed_ms: u128,
    pub mem: Option<mem::MemInfo>,
}

/// A layer-boundary snapshot: everything needed to resume a run.
#[derive(Clone, Debug)]
pub struct EngineState {
    anchor: Monomial,
    next_depth: u32,
    store: CompactStore,
    pending: Pending,
    warnings: Vec<Monomial>,
}

impl EngineState {
    pub fn anchor(&self) -> &Monomial {
        &self.anchor
    }

    /// The next layer to finalize.
    pub fn next_depth(&self) -> u32 {
        self.next_depth
    }

    pub fn finalized(&self) -> &CompactStore {
        &self.store
    }

    pub fn warnings(&self) -> &[Monomial] {
        &self.warnings
    }

    pub fn is_done(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn pending_len(&self) -> usize {
        self.pending.values().map(|l| l.len()).sum()
    }

    /// Pending monomials as `(depth, monomial, colorings)`, sorted.
    pub fn pending_sorted(&self) -> Vec<(u32, &Monomial, &Colors)> {
        let mut out = Vec::with_capacity(self.pending_len());
        for (d, layer) in &self.pending {
            let mut l: Vec<_> = layer.iter().map(|(m, c)| (*d, m, c)).collect();
            l.sort_by(|a, b| a.1.cmp(b.1));
            out.extend(l);
        }
        out
    }

    /// Reassembles a snapshot, e.g. from a checkpoint file.
    pub fn from_parts(
        anchor: Monomial,
        next_depth: u32,
        store: CompactStore,
        pending: Vec<(u32, Monomial, Colors)>,
        warnings: Vec<Monomial>,
    ) -> Self {
        let mut p: Pending = BTreeMap::new();
        for (d, m, c) in pending {
            p.entry(d).or_default().insert(m, c);
        }
        EngineState { anchor, next_depth, store, pending: p, warnings }
    }

    /// The result so far, in `qch` normalization.
    pub fn partial_qchar(&self) -> QChar {
        QChar::new(self.anchor.clone(), Normalization::Qch, self.store.iter().collect())
    }
}

/// The result of a completed run.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub qchar: QChar,
    pub stats: Vec<LayerStats>,
    /// l-dominant monomials finalized to zero in tolerant mode.
    pub warnings: Vec<Monomial>,
    /// Records stored with the coefficient-one tag.
    pub coefficient_one: u64,
}

/// What to do after a layer closes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Pause,
}

pub enum RunResult {
    Finished(Outcome),
    Paused(EngineState),
}

struct Finalized {
    monomial: Monomial,
    coeff: TPoly,
    expansions: SmallVec<[(u16, TPoly); 2]>,
    warned: bool,
}

pub struct Engine<'a> {
    data: &'a DynkinData,
    config: EngineConfig,
    pool: rayon::ThreadPool,
}

impl<'a> Engine<'a> {
    pub fn new(data: &'a DynkinData, config: EngineConfig) -> Result<Self, EngineError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| EngineError::ThreadPool(e.to_string()))?;
        Ok(Engine { data, config, pool })
    }

    pub fn data(&self) -> &DynkinData {
        self.data
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn start(&self, anchor: Monomial) -> Result<EngineState, EngineError> {
        if !anchor.is_l_dominant() {
            return Err(EngineError::AnchorNotDominant(anchor));
        }
        let rank = self.data.rank();
        if anchor.max_node() > rank {
            return Err(EngineError::BadNode { node: anchor.max_node(), rank });
        }
        let mut pending: Pending = BTreeMap::new();
        pending.entry(0).or_default().insert(anchor.clone(), Colors::new());
        Ok(EngineState {
            anchor,
            next_depth: 0,
            store: CompactStore::new(),
            pending,
            warnings: Vec::new(),
        })
    }

    fn finalize(&self, depth: u32, m: Monomial, colors: Colors) -> Result<Finalized, EngineError> {
        let mut nondominant: SmallVec<[u16; 8]> = SmallVec::new();
        for f in m.factors() {
            if f.exp < 0 && nondominant.last() != Some(&f.node) {
                nondominant.push(f.node);
            }
        }
        let mut warned = false;
        let coeff = if depth == 0 {
            TPoly::one()
        } else if nondominant.is_empty() {
            match self.config.mode {
                Mode::Strict => return Err(EngineError::AlgorithmStopped(m)),
                Mode::Tolerant => {
                    warned = true;
                    TPoly::zero()
                }
            }
        } else {
            let a = color_of(&colors, nondominant[0]);
            for &n in &nondominant[1..] {
                if color_of(&colors, n) != a {
                    let colorings = colors
                        .iter()
                        .map(|(n, p)| format!("{n}: {p}"))
                        .collect::<Vec<_>>()
                        .join("; ");
                    return Err(EngineError::AlgorithmFailed { monomial: m, colorings });
                }
            }
            a
        };
        let mut expansions = SmallVec::new();
        let mut prev = 0u16;
        for f in m.factors() {
            if f.node == prev || nondominant.contains(&f.node) {
                continue;
            }
            prev = f.node;
            let c = &coeff - &color_of(&colors, f.node);
            if !c.is_zero() {
                expansions.push((f.node, c));
            }
        }
        Ok(Finalized { monomial: m, coeff, expansions, warned })
    }

    /// Finalizes and expands the next layer. Returns `None` once nothing
    /// is pending.
    pub fn step(&self, state: &mut EngineState) -> Result<Option<LayerStats>, EngineError> {
        let started = Instant::now();
        let Some((&depth, _)) = state.pending.iter().next() else {
            return Ok(None);
        };
        if depth > self.config.max_depth {
            return Err(EngineError::DepthGuardExceeded(depth));
        }
        let layer = state.pending.remove(&depth).unwrap();
        let mut entries: Vec<(Monomial, Colors)> = layer.into_iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let layer_size = entries.len();

        let data = self.data;
        let (finals, contributions) = self.pool.install(|| {
            let finals: Vec<Result<Finalized, EngineError>> = entries
                .into_par_iter()
                .map(|(m, c)| self.finalize(depth, m, c))
                .collect();
            let finals: Vec<Finalized> = finals.into_iter().collect::<Result<_, _>>()?;
            let contributions: Result<Pending, EngineError> = finals
                .par_iter()
                .try_fold(Pending::new, |mut acc, fin| {
                    for (node, c) in &fin.expansions {
                        for con in expand_i(data, &fin.monomial, *node as usize, c)? {
                            let colors = acc
                                .entry(depth + con.step)
                                .or_default()
                                .entry(con.monomial)
                                .or_default();
                            add_color(colors, *node, &con.coeff);
                        }
                    }
                    Ok(acc)
                })
                .try_reduce(Pending::new, |mut a, b| {
                    if a.len() < b.len() {
                        let mut b = b;
                        merge_pending(&mut b, a);
                        return Ok(b);
                    }
                    merge_pending(&mut a, b);
                    Ok(a)
                });
            Ok::<_, EngineError>((finals, contributions?))
        })?;

        merge_pending(&mut state.pending, contributions);
        // contributions may cancel completely
        for layer in state.pending.values_mut() {
            layer.retain(|_, c| !c.is_empty());
        }
        state.pending.retain(|_, l| !l.is_empty());

        let mut nonzero = 0;
        for fin in &finals {
            if fin.warned {
                log::warn!("l-dominant monomial {} finalized to zero", fin.monomial);
                state.warnings.push(fin.monomial.clone());
            }
            if !fin.coeff.is_zero() {
                state.store.push(&fin.monomial, &fin.coeff);
                nonzero += 1;
            }
        }
        state.next_depth = depth + 1;
        Ok(Some(LayerStats {
            depth,
            layer_size,
            nonzero,
            pending: state.pending_len(),
            total: state.store.len(),
            elapsed_ms: started.elapsed().as_millis(),
            mem: mem::current(),
        }))
    }

    /// Runs layers until done or until `on_layer` asks to pause.
    pub fn run_with(
        &self,
        mut state: EngineState,
        mut on_layer: impl FnMut(&LayerStats, &EngineState) -> Flow,
    ) -> Result<RunResult, EngineError> {
        let mut stats = Vec::new();
        while let Some(s) = self.step(&mut state)? {
            let flow = on_layer(&s, &state);
            stats.push(s);
            if flow == Flow::Pause && !state.is_done() {
                return Ok(RunResult::Paused(state));
            }
        }
        let coefficient_one = state.store.coefficient_one_count();
        Ok(RunResult::Finished(Outcome {
            qchar: state.partial_qchar(),
            stats,
            warnings: state.warnings,
            coefficient_one,
        }))
    }

    pub fn run(&self, state: EngineState) -> Result<Outcome, EngineError> {
        match self.run_with(state, |_, _| Flow::Continue)? {
            RunResult::Finished(o) => Ok(o),
            RunResult::Paused(_) => unreachable!("never paused"),
        }
    }

    pub fn compute(&self, anchor: Monomial) -> Result<Outcome, EngineError> {
        self.run(self.start(anchor)?)
    }
}

/// `qch_{q,t}` of the l-fundamental module with `P_N(u) = 1 - u`.
pub fn compute_l_fundamental(data: &DynkinData, node: usize) -> Result<QChar, EngineError> {
    if node == 0 || node > data.rank() {
        return Err(EngineError::BadNode { node, rank: data.rank() });
    }
    let engine = Engine::new(data, EngineConfig::default())?;
    Ok(engine.compute(Monomial::y(node, 0))?.qchar)
}

/// Runs the recursion from the l-dominant monomial of `q`.
pub fn compute_from_drinfeld(data: &DynkinData, q: &DrinfeldData, mode: Mode) -> Result<QChar, EngineError> {
    if q.is_empty() {
        return Err(EngineError::EmptyDrinfeld);
    }
    let engine = Engine::new(data, EngineConfig { mode, ..EngineConfig::default() })?;
    Ok(engine.compute(q.to_monomial())?.qchar)
}
