//! File formats and the command-line driver for `emden-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::io::Write;

use config::{Format, RunConfig};
use error::{LabError, LabResult};

/// Run one command and write its output where the configuration says.
pub fn execute(cfg: &RunConfig) -> LabResult<()> {
    let report = commands::run(cfg)?;
    let text = match cfg.format() {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json(),
    };
    match &cfg.params.out {
        Some(path) => std::fs::write(path, text).map_err(|source| LabError::Io { path: path.clone(), source }),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // A closed pipe (`| head`) is not a failure.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|source| LabError::Io { path: "<stdout>".into(), source }),
        },
    }
}
