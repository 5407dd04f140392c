//! Scenario runner for pseudo-Hermitian invariant dynamics: scenario files,
//! presets, report and curve output, and a seeded scenario generator.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod config;
pub mod random;
pub mod report;
pub mod runner;
pub mod scenario_file;
pub mod table;

pub use config::{Emit, Mode, RunConfig};
pub use runner::{run, RunOutcome};

/// Every failure here maps to exit status 1.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] pseudoinv_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// 17 significant digits; non-finite values use TOML spellings.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        // adding +0.0 folds −0 into +0
        format!("{:.16e}", x + 0.0)
    }
}
