//! Shared inputs for the benchmarks.

use qchar_core::{compute_l_fundamental, DynkinData, DynkinKind, QChar};

pub fn data(kind: DynkinKind, rank: usize) -> DynkinData {
    DynkinData::new(kind, rank).expect("valid type")
}

pub fn fundamental(kind: DynkinKind, rank: usize, node: usize) -> (DynkinData, QChar) {
    let d = data(kind, rank);
    let q = compute_l_fundamental(&d, node).expect("fundamental");
    (d, q)
}
