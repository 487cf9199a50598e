//! `sc2d extract-patches`: tensorize a band-stack for training.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use sc2d_core::patch::remove_patch_means;
use sc2d_core::PatchGrid;

use crate::bandstack;
use crate::error::{CliError, CliResult};
use crate::manifest::ManifestBuilder;
use crate::t3b;

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Input band-stack: a T3B file or a PGM directory with bands.txt.
    #[arg(long)]
    pub image: PathBuf,
    /// Patch side.
    #[arg(long, default_value_t = 5)]
    pub patch: usize,
    /// Patch grid stride.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Subtract each patch's mean; means are stored next to the output.
    #[arg(long)]
    pub remove_means: bool,
    /// Output patch tensor (T3B).
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &ExtractArgs, threads: usize) -> CliResult<()> {
    let image = bandstack::load(&args.image)?;
    let (h, w, bands) = image.dims();
    let grid = PatchGrid::new(h, w, bands, args.patch, args.stride)?;
    let mut patches = grid.extract(&image)?;

    let out_dir = args
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir).map_err(|e| CliError::io_at(&out_dir, e))?;

    let mut manifest = ManifestBuilder::new(
        "extract-patches",
        threads,
        json!({
            "patch": args.patch,
            "stride": args.stride,
            "remove_means": args.remove_means,
            "grid_rows": grid.rows(),
            "grid_cols": grid.cols(),
        }),
    );
    manifest.input(&args.image);

    if args.remove_means {
        let means = remove_patch_means(&mut patches);
        let means_path = args.out.with_extension("means.csv");
        let mut body = String::from("patch,mean\n");
        for (j, m) in means.iter().enumerate() {
            body.push_str(&format!("{j},{m:.17e}\n"));
        }
        fs::write(&means_path, body).map_err(|e| CliError::io_at(&means_path, e))?;
        manifest.output(&means_path);
    }

    t3b::write(&args.out, &patches)?;
    manifest.output(&args.out);
    eprintln!(
        "extract-patches: {} patches of {}x{}x{} from {}x{}x{}",
        grid.num_patches(),
        args.patch,
        args.patch,
        bands,
        h,
        w,
        bands
    );
    manifest.write(&out_dir)
}
