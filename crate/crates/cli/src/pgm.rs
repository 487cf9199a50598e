//! Binary PGM (P5) images, 8- and 16-bit.
//!
//! 16-bit samples are big-endian per the netpbm convention. Writing clamps
//! and rounds to the sample range; pixel data outside [0, maxval] cannot be
//! represented by the format.

use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u32,
    /// Row-major samples as reals.
    pub pixels: Vec<f64>,
}

pub fn read(path: &Path) -> CliResult<Pgm> {
    let bytes = fs::read(path).map_err(|e| CliError::io_at(path, e))?;
    parse(&bytes).map_err(|msg| CliError::io_at(path, msg))
}

pub fn write(path: &Path, pgm: &Pgm) -> CliResult<()> {
    fs::write(path, encode(pgm)).map_err(|e| CliError::io_at(path, e))
}

pub fn encode(pgm: &Pgm) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", pgm.width, pgm.height, pgm.maxval).into_bytes();
    let max = pgm.maxval as f64;
    for v in &pgm.pixels {
        let q = v.clamp(0.0, max).round() as u32;
        if pgm.maxval > 255 {
            out.extend_from_slice(&(q as u16).to_be_bytes());
        } else {
            out.push(q as u8);
        }
    }
    out
}

struct HeaderScanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderScanner<'a> {
    /// Next whitespace-delimited token, skipping `#` comments.
    fn token(&mut self) -> Result<&'a [u8], String> {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            break;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err("unexpected end of header".to_string());
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<usize, String> {
        let tok = self.token()?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| "malformed number in header".to_string())
    }
}

pub fn parse(bytes: &[u8]) -> Result<Pgm, String> {
    let mut scanner = HeaderScanner { bytes, pos: 0 };
    if scanner.token()? != b"P5" {
        return Err("not a binary PGM (P5) file".to_string());
    }
    let width = scanner.number()?;
    let height = scanner.number()?;
    let maxval = scanner.number()?;
    if width == 0 || height == 0 {
        return Err("zero image extent".to_string());
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    // exactly one whitespace byte separates the header from the raster
    let data = &bytes[scanner.pos + 1..];
    let count = width * height;
    let pixels = if maxval > 255 {
        if data.len() != count * 2 {
            return Err(format!(
                "raster length {} does not match {}x{} 16-bit samples",
                data.len(),
                width,
                height
            ));
        }
        data.chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64)
            .collect()
    } else {
        if data.len() != count {
            return Err(format!(
                "raster length {} does not match {}x{} 8-bit samples",
                data.len(),
                width,
                height
            ));
        }
        data.iter().map(|b| *b as f64).collect()
    };
    Ok(Pgm {
        width,
        height,
        maxval: maxval as u32,
        pixels,
    })
}
