//! Configuration-driven experiment runner behind the command-line tool.

mod commands;
mod config;
mod output;

pub use commands::{
    cmd_reproduce, cmd_simulate, cmd_sweep, cmd_synthesize, linspace, BGateSummary,
    ReproduceTarget, RunOutcome,
};
pub use config::{ExperimentConfig, SchemeName};
pub use output::{sha256_hex, write_atomic, Check, Manifest, ManifestEntry, OutputSink};

use crate::error::{Error, Result};

/// Runs `f` on a bounded worker pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    Ok(pool.install(f))
}
