//! `sc2d metrics`: PSNR/SSIM between two band-stacks.

use std::fs;
use std::path::PathBuf;

use clap::Args;

use sc2d_core::metrics::metric_report;

use crate::bandstack;
use crate::error::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Reference band-stack.
    #[arg(long)]
    pub reference: PathBuf,
    /// Band-stack under test.
    #[arg(long)]
    pub test: PathBuf,
    /// Optional CSV output (`band,psnr,ssim` rows plus an `all` summary).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &MetricsArgs) -> CliResult<()> {
    let reference = bandstack::load(&args.reference)?;
    let test = bandstack::load(&args.test)?;
    let report = metric_report(&reference, &test)?;

    println!("psnr = {:.4} dB, ssim = {:.6}", report.psnr, report.ssim);
    for (b, (p, s)) in report
        .psnr_per_band
        .iter()
        .zip(report.ssim_per_band.iter())
        .enumerate()
    {
        println!("band {b}: psnr = {p:.4} dB, ssim = {s:.6}");
    }

    if let Some(path) = &args.out {
        let mut body = String::from("band,psnr,ssim\n");
        for (b, (p, s)) in report
            .psnr_per_band
            .iter()
            .zip(report.ssim_per_band.iter())
            .enumerate()
        {
            body.push_str(&format!("{b},{p:.4},{s:.6}\n"));
        }
        body.push_str(&format!("all,{:.4},{:.6}\n", report.psnr, report.ssim));
        fs::write(path, body).map_err(|e| CliError::io_at(path, e))?;
    }
    Ok(())
}
