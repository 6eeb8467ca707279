//! Reading q-character files (text or binary, by magic) and writing results.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use qchar_core::io::binary::{self, Layout};
use qchar_core::io::text::{qchar_from_text, qchar_to_text};
use qchar_core::{DynkinData, QChar};

use crate::{Failure, OutArgs};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Bin,
}

/// `forced` overrides (or supplies) the Cartan type of a text file.
pub fn read_qchar_file(path: &Path, forced: Option<DynkinData>) -> Result<(DynkinData, QChar), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if bytes.starts_with(binary::MAGIC) {
        let (data, q) = binary::read_qchar(&bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        return Ok((forced.unwrap_or(data), q));
    }
    let text = String::from_utf8(bytes).map_err(|_| Failure::usage(format!("{}: not text", path.display())))?;
    let (label, q) = qchar_from_text(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let data = match (forced, label) {
        (Some(d), _) => d,
        (None, Some(l)) => l.parse().map_err(|e: qchar_core::RootError| Failure::usage(e.to_string()))?,
        (None, None) => return Err(Failure::usage(format!("{}: no `# type` header; pass --type", path.display()))),
    };
    Ok((data, q))
}

pub fn emit_bytes(bytes: &[u8], out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(|e| Failure::usage(e.to_string()))
        }
    }
}

pub fn emit_text(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    emit_bytes(text.as_bytes(), out)
}

pub fn write_output(data: &DynkinData, q: &QChar, out: &OutArgs) -> Result<(), Failure> {
    write_with_head(data, q, out, "")
}

/// Text output gets `head` prepended; binary output ignores it.
pub fn write_with_head(data: &DynkinData, q: &QChar, out: &OutArgs, head: &str) -> Result<(), Failure> {
    let q = match (out.chi, q.norm()) {
        (true, qchar_core::Normalization::Qch) => q.to_chi(data),
        (false, qchar_core::Normalization::Chi) => q.to_qch(data),
        _ => q.clone(),
    };
    match out.format {
        OutputFormat::Text => emit_text(&format!("{head}{}", qchar_to_text(data, &q)), out.out.as_deref()),
        OutputFormat::Bin => {
            let layout = if out.flat { Layout::Flat } else { Layout::Tree };
            emit_bytes(&binary::write_qchar(data, &q, layout), out.out.as_deref())
        }
    }
}
