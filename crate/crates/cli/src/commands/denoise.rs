//! `sc2d denoise`: the multi-band denoising protocol end to end.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde_json::json;

use sc2d_core::noise::add_gaussian_noise;
use sc2d_core::{denoise, DenoiseConfig, TrainConfig};

use crate::bandstack;
use crate::commands::train::Mode;
use crate::commands::{ensure_dir, write_train_trace};
use crate::error::{CliError, CliResult};
use crate::manifest::ManifestBuilder;
use crate::t3b;

/// Published operating points: sparsity weight per noise level.
pub const BETA_FOR_SIGMA: [(f64, f64); 5] = [
    (5.0, 10.0),
    (10.0, 28.0),
    (20.0, 200.0),
    (30.0, 220.0),
    (50.0, 290.0),
];

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    /// Noisy band-stack: a T3B file or a PGM directory with bands.txt.
    #[arg(long)]
    pub noisy: PathBuf,
    /// Noise level the run is calibrated for.
    #[arg(long)]
    pub sigma: f64,
    /// Sparsity weight; defaults to the published value for --sigma.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Patch side.
    #[arg(long, default_value_t = 5)]
    pub patch: usize,
    /// Patch grid stride.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 30)]
    pub atoms: usize,
    #[arg(long, default_value_t = 30)]
    pub outer: usize,
    #[arg(long, default_value_t = 60)]
    pub inner_iters: usize,
    #[arg(long, default_value_t = 1e-5)]
    pub inner_tol: f64,
    #[arg(long, value_enum, default_value_t = Mode::Fista)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Clean reference band-stack for metric reporting.
    #[arg(long)]
    pub clean: Option<PathBuf>,
    /// Treat --noisy as a clean image and add seeded Gaussian noise first.
    #[arg(long)]
    pub synth_noise: bool,
    /// Additionally export the denoised stack as clamped 8-bit PGMs.
    #[arg(long)]
    pub clip: bool,
    /// Code raw patches instead of removing per-patch means first.
    #[arg(long)]
    pub no_mean_removal: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn resolve_beta(args: &DenoiseArgs) -> CliResult<f64> {
    if let Some(beta) = args.beta {
        return Ok(beta);
    }
    for (sigma, beta) in BETA_FOR_SIGMA {
        if (args.sigma - sigma).abs() < 1e-9 {
            eprintln!(
                "denoise: applying published operating point beta = {beta} for sigma = {sigma}"
            );
            return Ok(beta);
        }
    }
    Err(CliError::Usage(format!(
        "no published beta for sigma = {} (known: 5, 10, 20, 30, 50); pass --beta",
        args.sigma
    )))
}

pub fn run(args: &DenoiseArgs, threads: usize) -> CliResult<()> {
    if args.sigma < 0.0 {
        return Err(CliError::Usage("sigma must be nonnegative".to_string()));
    }
    let beta = resolve_beta(args)?;
    let started = Instant::now();

    let loaded = bandstack::load(&args.noisy)?;
    let noisy = if args.synth_noise {
        eprintln!(
            "denoise: adding sigma = {} noise (seed {}) to {}",
            args.sigma,
            args.seed,
            args.noisy.display()
        );
        add_gaussian_noise(&loaded, args.sigma, args.seed)
    } else {
        loaded
    };
    let clean = match &args.clean {
        Some(path) => Some(bandstack::load(path)?),
        None => None,
    };
    if let Some(reference) = &clean {
        if reference.dims() != noisy.dims() {
            return Err(CliError::Io(format!(
                "clean reference extents {:?} do not match noisy input {:?}",
                reference.dims(),
                noisy.dims()
            )));
        }
    }

    let mut tc = TrainConfig::new(args.atoms, beta);
    tc.outer_iters = args.outer;
    tc.seed = args.seed;
    tc.inner.max_iters = args.inner_iters;
    tc.inner.rel_tol = args.inner_tol;
    tc.inner.mode = args.mode.into();
    let mut cfg = DenoiseConfig::new(tc);
    cfg.patch = args.patch;
    cfg.stride = args.stride;
    cfg.remove_means = !args.no_mean_removal;

    let mut manifest = ManifestBuilder::new(
        "denoise",
        threads,
        json!({
            "sigma": args.sigma,
            "beta": beta,
            "patch": args.patch,
            "stride": args.stride,
            "atoms": args.atoms,
            "outer": args.outer,
            "inner_iters": args.inner_iters,
            "inner_tol": args.inner_tol,
            "mode": format!("{:?}", args.mode),
            "seed": args.seed,
            "synth_noise": args.synth_noise,
            "mean_removal": !args.no_mean_removal,
        }),
    );
    manifest.input(&args.noisy);
    if let Some(path) = &args.clean {
        manifest.input(path);
    }

    let output = denoise(&noisy, clean.as_ref(), &cfg)?;
    if output.uncovered > 0 {
        eprintln!(
            "denoise: {} border pixel(s) not covered by the patch grid were filled from neighbors",
            output.uncovered
        );
    }

    ensure_dir(&args.out)?;
    let denoised_path = args.out.join("denoised.t3b");
    bandstack::save_t3b(&denoised_path, &output.denoised)?;
    manifest.output(&denoised_path);

    let dict_path = args.out.join("dict.t3b");
    t3b::write(&dict_path, &output.dictionary)?;
    manifest.output(&dict_path);

    let trace_path = args.out.join("trace.csv");
    write_train_trace(&trace_path, &output.trace)?;
    manifest.output(&trace_path);

    if args.clip {
        let pgm_dir = args.out.join("denoised_pgm");
        for path in bandstack::save_pgm_dir(&pgm_dir, &output.denoised)? {
            manifest.output(&path);
        }
    }

    let seconds = started.elapsed().as_secs_f64();
    if let Some(metrics) = &output.metrics {
        let metrics_path = args.out.join("metrics.csv");
        let row = format!(
            "sigma,beta,psnr,ssim,seconds\n{},{},{:.4},{:.6},{:.3}\n",
            args.sigma, beta, metrics.psnr, metrics.ssim, seconds
        );
        fs::write(&metrics_path, row).map_err(|e| CliError::io_at(&metrics_path, e))?;
        manifest.output(&metrics_path);
        eprintln!(
            "denoise: psnr {:.2} dB, ssim {:.4} ({:.1}s)",
            metrics.psnr, metrics.ssim, seconds
        );
    } else {
        eprintln!("denoise: no clean reference supplied, metrics skipped ({seconds:.1}s)");
    }
    manifest.write(&args.out)
}
