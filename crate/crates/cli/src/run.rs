//! Engine runs with progress reporting, memory guard and checkpoints.

use std::path::Path;

use qchar_core::engine::{Engine, EngineConfig, EngineState, Flow, LayerStats, RunResult};
use qchar_core::io::binary::{write_checkpoint, Layout};
use qchar_core::{DynkinData, Mode, Monomial, QChar};

use crate::{Failure, RunArgs, EXIT_GUARD};

pub enum Start {
    Anchor(Monomial),
    State(EngineState),
}

fn save(data: &DynkinData, state: &EngineState, path: &Path) -> Result<(), Failure> {
    // write then rename so an interrupted save keeps the previous file
    let tmp = path.with_extension("partial");
    std::fs::write(&tmp, write_checkpoint(data, state, Layout::Tree))
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn report(s: &LayerStats) {
    let (rss, hwm) = s.mem.map_or((0, 0), |m| (m.rss_kb / 1024, m.hwm_kb / 1024));
    eprintln!(
        "layer {:>4}: {:>9} monomials ({} nonzero), {:>9} pending, {:>10} total, {:>6} ms, rss {} MiB, peak {} MiB",
        s.depth, s.layer_size, s.nonzero, s.pending, s.total, s.elapsed_ms, rss, hwm
    );
}

pub fn run_engine(data: &DynkinData, start: Start, args: &RunArgs, mode: Mode) -> Result<QChar, Failure> {
    let config = EngineConfig { threads: args.threads, max_depth: args.max_depth, mode };
    let engine = Engine::new(data, config)?;
    let state = match start {
        Start::Anchor(m) => engine.start(m)?,
        Start::State(s) => s,
    };
    let mut save_error = None;
    let mut over_memory = false;
    let result = engine.run_with(state, |s, state| {
        if args.mem_report {
            report(s);
        }
        if let Some(limit) = args.max_mem {
            if s.mem.is_some_and(|m| m.rss_kb / 1024 > limit) {
                over_memory = true;
                return Flow::Pause;
            }
        }
        if let Some(path) = &args.checkpoint {
            if (s.depth + 1) % args.checkpoint_every == 0 {
                if let Err(e) = save(data, state, path) {
                    save_error = Some(e);
                    return Flow::Pause;
                }
            }
        }
        Flow::Continue
    })?;
    if let Some(e) = save_error {
        return Err(e);
    }
    match result {
        RunResult::Finished(outcome) => Ok(outcome.qchar),
        RunResult::Paused(state) => {
            let mut msg = format!("memory guard: resident set above {} MiB", args.max_mem.unwrap_or(0));
            debug_assert!(over_memory);
            if let Some(path) = &args.checkpoint {
                save(data, &state, path)?;
                msg += &format!("; checkpoint written to {}", path.display());
            }
            Err(Failure { code: EXIT_GUARD, msg })
        }
    }
}
