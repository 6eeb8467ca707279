//! Exact t-analogs of q-characters for simply-laced quantum loop algebras.
//!
//! The core pieces: Cartan/Weyl data ([`root`]), Laurent polynomials in `t`
//! ([`laurent`]), monomials in `Y[i,k]` ([`monomial`]), the layered
//! expansion engine ([`engine`]), restriction to classical characters
//! ([`restriction`]), standard modules and simple characters
//! ([`standard`]), monomial crystals ([`crystal`]) and file formats ([`io`]).

pub mod crystal;
pub mod engine;
pub mod int;
pub mod io;
pub mod laurent;
pub mod mem;
pub mod monomial;
pub mod restriction;
pub mod root;
pub mod standard;

pub use crystal::{generate_crystal, Convention, CrystalError, CrystalGraph};
pub use engine::{
    compute_from_drinfeld, compute_l_fundamental, Engine, EngineConfig, EngineError, EngineState, Flow, LayerStats,
    Mode, Normalization, Outcome, QChar, RunResult,
};
pub use int::Int;
pub use io::{FormatError, TextError};
pub use laurent::TPoly;
pub use monomial::{AnchoredMonomial, DrinfeldData, Monomial, MonomialError, VVector};
pub use restriction::{decompose, ic_matrix, restrict, DecompositionTable, IcResult, RestrictionError};
pub use root::{ClassicalChar, DynkinData, DynkinKind, RootError, Weight};
pub use standard::{kl_simple, standards_for, twisted_product, KlError, KlResult};
