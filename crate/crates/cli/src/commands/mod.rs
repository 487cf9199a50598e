//! Command implementations and shared output helpers.

use std::fs;
use std::path::{Path, PathBuf};

use sc2d_core::TraceRow;

use crate::error::{CliError, CliResult};

pub mod bench;
pub mod check;
pub mod denoise;
pub mod encode;
pub mod extract;
pub mod metrics;
pub mod train;

pub fn ensure_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io_at(path, e))
}

/// Training trace: `iter,objective,data_term,l1_term,sparsity`.
pub fn write_train_trace(path: &Path, trace: &[TraceRow]) -> CliResult<()> {
    let mut body = String::from("iter,objective,data_term,l1_term,sparsity\n");
    for row in trace {
        body.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.6}\n",
            row.iter, row.objective, row.data_term, row.l1_term, row.sparsity
        ));
    }
    fs::write(path, body).map_err(|e| CliError::io_at(path, e))
}

/// Per-step objective trace of a single solve: `iter,objective`.
pub fn write_objective_trace(path: &Path, values: &[f64]) -> CliResult<()> {
    let mut body = String::from("iter,objective\n");
    for (i, v) in values.iter().enumerate() {
        body.push_str(&format!("{i},{v:.17e}\n"));
    }
    fs::write(path, body).map_err(|e| CliError::io_at(path, e))
}

/// First existing path problem becomes an error naming the path.
pub fn require_file(path: &PathBuf) -> CliResult<()> {
    if !path.exists() {
        return Err(CliError::io_at(path, "no such file or directory"));
    }
    Ok(())
}
