//! `sc2d encode`: solve for coefficients against a fixed dictionary.

use std::path::PathBuf;

use clap::Args;
use serde_json::json;

use sc2d_core::{ista_t, SolverConfig};

use crate::commands::train::Mode;
use crate::commands::{ensure_dir, write_objective_trace};
use crate::error::{CliError, CliResult};
use crate::manifest::ManifestBuilder;
use crate::t3b;

#[derive(Debug, Args)]
pub struct EncodeArgs {
    /// Input patch tensor (T3B).
    #[arg(long)]
    pub input: PathBuf,
    /// Dictionary tensor (T3B).
    #[arg(long)]
    pub dict: PathBuf,
    /// Sparsity weight.
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 200)]
    pub iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Mode::Fista)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: &EncodeArgs, threads: usize) -> CliResult<()> {
    let patches = t3b::read(&args.input)?;
    let dict = t3b::read(&args.dict)?;
    if dict.m() != patches.m() || dict.k() != patches.k() {
        return Err(CliError::Io(format!(
            "{}: dictionary {}x{}x{} does not match patches {}x{}x{}",
            args.dict.display(),
            dict.m(),
            dict.n(),
            dict.k(),
            patches.m(),
            patches.n(),
            patches.k()
        )));
    }
    let mut cfg = SolverConfig::new(args.beta);
    cfg.max_iters = args.iters;
    cfg.rel_tol = args.tol;
    cfg.mode = args.mode.into();
    cfg.eta = args.eta;
    cfg.validate()?;

    let mut manifest = ManifestBuilder::new(
        "encode",
        threads,
        json!({
            "beta": args.beta,
            "iters": args.iters,
            "tol": args.tol,
            "mode": format!("{:?}", args.mode),
            "eta": args.eta,
        }),
    );
    manifest.input(&args.input);
    manifest.input(&args.dict);

    let (coeffs, report) = ista_t(&patches, &dict, &cfg)?;
    eprintln!(
        "encode: {} iterations, objective {:.6e}, sparsity {:.3}, L = {:.6e}",
        report.iterations_run,
        report.objective_trace.last().copied().unwrap_or(f64::NAN),
        report.final_sparsity,
        report.lipschitz_used
    );

    ensure_dir(&args.out)?;
    let coeff_path = args.out.join("coeffs.t3b");
    let trace_path = args.out.join("trace.csv");
    t3b::write(&coeff_path, &coeffs)?;
    write_objective_trace(&trace_path, &report.objective_trace)?;
    manifest.output(&coeff_path);
    manifest.output(&trace_path);
    manifest.write(&args.out)
}
