//! The `T3B` tensor container.
//!
//! Layout: magic `T3B1`, then `m`, `n`, `k` as little-endian u32, then
//! `m·n·k` little-endian IEEE-754 doubles in the tensor's storage order
//! (frontal-slice-major, column-major within each slice). Outputs are
//! bitwise reproducible because the scalars are written exactly as stored.

use std::fs;
use std::path::Path;

use sc2d_core::Tensor3;

use crate::error::{CliError, CliResult};

pub const MAGIC: &[u8; 4] = b"T3B1";

pub fn read(path: &Path) -> CliResult<Tensor3> {
    let bytes = fs::read(path).map_err(|e| CliError::io_at(path, e))?;
    parse(&bytes).map_err(|msg| CliError::io_at(path, msg))
}

pub fn write(path: &Path, tensor: &Tensor3) -> CliResult<()> {
    fs::write(path, encode(tensor)).map_err(|e| CliError::io_at(path, e))
}

pub fn encode(tensor: &Tensor3) -> Vec<u8> {
    let (m, n, k) = tensor.dims();
    let mut out = Vec::with_capacity(16 + tensor.data().len() * 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(m as u32).to_le_bytes());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(k as u32).to_le_bytes());
    for v in tensor.data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn parse(bytes: &[u8]) -> Result<Tensor3, String> {
    if bytes.len() < 16 {
        return Err(format!("truncated header ({} bytes)", bytes.len()));
    }
    if &bytes[0..4] != MAGIC {
        return Err("bad magic, not a T3B tensor file".to_string());
    }
    let dim = |off: usize| u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as usize;
    let (m, n, k) = (dim(4), dim(8), dim(12));
    let count = m
        .checked_mul(n)
        .and_then(|v| v.checked_mul(k))
        .ok_or_else(|| "extent overflow".to_string())?;
    let expected = 16 + count * 8;
    if bytes.len() != expected {
        return Err(format!(
            "payload length {} does not match extents {}x{}x{} ({} expected)",
            bytes.len(),
            m,
            n,
            k,
            expected
        ));
    }
    let data = bytes[16..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Tensor3::from_data(m, n, k, data).map_err(|e| e.to_string())
}
