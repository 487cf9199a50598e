//! Band-stack loading and saving.
//!
//! A band-stack is either a single `T3B` tensor (height × width × bands) or
//! a directory of per-band PGM files listed, in band order, by a `bands.txt`
//! manifest (one relative filename per line; blank lines and `#` comments
//! ignored).

use std::fs;
use std::path::{Path, PathBuf};

use sc2d_core::{BandImage, Tensor3};

use crate::error::{CliError, CliResult};
use crate::pgm::{self, Pgm};
use crate::t3b;

pub const BAND_MANIFEST: &str = "bands.txt";

pub fn tensor_to_image(t: &Tensor3) -> BandImage {
    let (h, w, bands) = t.dims();
    let mut img = BandImage::zeros(h, w, bands);
    for b in 0..bands {
        for y in 0..h {
            for x in 0..w {
                img.set(y, x, b, t.get(y, x, b));
            }
        }
    }
    img
}

pub fn image_to_tensor(img: &BandImage) -> Tensor3 {
    let (h, w, bands) = img.dims();
    let mut t = Tensor3::zeros(h, w, bands);
    for b in 0..bands {
        for y in 0..h {
            for x in 0..w {
                t.set(y, x, b, img.get(y, x, b));
            }
        }
    }
    t
}

/// Loads a band-stack from a `T3B` file or a PGM directory.
pub fn load(path: &Path) -> CliResult<BandImage> {
    if path.is_dir() {
        load_pgm_dir(path)
    } else if path.is_file() {
        Ok(tensor_to_image(&t3b::read(path)?))
    } else {
        Err(CliError::io_at(path, "no such file or directory"))
    }
}

fn load_pgm_dir(dir: &Path) -> CliResult<BandImage> {
    let manifest = dir.join(BAND_MANIFEST);
    let listing = fs::read_to_string(&manifest)
        .map_err(|e| CliError::io_at(&manifest, format!("unknown band manifest: {e}")))?;
    let names: Vec<&str> = listing
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if names.is_empty() {
        return Err(CliError::io_at(&manifest, "manifest lists no bands"));
    }
    let mut bands: Vec<Pgm> = Vec::with_capacity(names.len());
    for name in &names {
        bands.push(pgm::read(&dir.join(name))?);
    }
    let (w, h) = (bands[0].width, bands[0].height);
    for (name, band) in names.iter().zip(bands.iter()) {
        if band.width != w || band.height != h {
            return Err(CliError::Io(format!(
                "{}: band extent {}x{} differs from {}x{}",
                name, band.width, band.height, w, h
            )));
        }
    }
    let mut img = BandImage::zeros(h, w, bands.len());
    for (b, band) in bands.iter().enumerate() {
        for y in 0..h {
            for x in 0..w {
                img.set(y, x, b, band.pixels[y * w + x]);
            }
        }
    }
    Ok(img)
}

/// Writes the band-stack losslessly as a `T3B` tensor.
pub fn save_t3b(path: &Path, img: &BandImage) -> CliResult<()> {
    t3b::write(path, &image_to_tensor(img))
}

/// Exports the band-stack as 8-bit PGMs plus a manifest; pixels are clamped
/// to [0, 255], so this is for visualization, not archival.
pub fn save_pgm_dir(dir: &Path, img: &BandImage) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io_at(dir, e))?;
    let (h, w, bands) = img.dims();
    let mut written = Vec::new();
    let mut manifest = String::new();
    for b in 0..bands {
        let name = format!("band_{b:02}.pgm");
        let out = Pgm {
            width: w,
            height: h,
            maxval: 255,
            pixels: img.band(b).to_vec(),
        };
        let path = dir.join(&name);
        pgm::write(&path, &out)?;
        written.push(path);
        manifest.push_str(&name);
        manifest.push('\n');
    }
    let manifest_path = dir.join(BAND_MANIFEST);
    fs::write(&manifest_path, manifest).map_err(|e| CliError::io_at(&manifest_path, e))?;
    written.push(manifest_path);
    Ok(written)
}
