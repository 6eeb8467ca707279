//! File formats: canonical text forms and the versioned binary format.

pub mod binary;
pub mod codec;
pub mod text;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    BadVersion(u16),
    #[error("truncated input")]
    Truncated,
    #[error("corrupt input: {0}")]
    Corrupt(&'static str),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct TextError {
    pub line: usize,
    pub msg: String,
}

impl TextError {
    pub fn at(line: usize, msg: String) -> Self {
        TextError { line, msg }
    }
}
