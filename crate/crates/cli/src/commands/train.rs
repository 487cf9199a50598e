//! `sc2d train`: learn a dictionary from a patch tensor.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::json;

use sc2d_core::dict::dead_atoms;
use sc2d_core::{train, SolverMode, TrainConfig};

use crate::commands::{ensure_dir, write_train_trace};
use crate::error::CliResult;
use crate::manifest::ManifestBuilder;
use crate::t3b;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ista,
    Fista,
}

impl From<Mode> for SolverMode {
    fn from(m: Mode) -> SolverMode {
        match m {
            Mode::Ista => SolverMode::Ista,
            Mode::Fista => SolverMode::Fista,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Input patch tensor (T3B).
    #[arg(long)]
    pub input: PathBuf,
    /// Number of dictionary atoms.
    #[arg(long)]
    pub atoms: usize,
    /// Sparsity weight.
    #[arg(long)]
    pub beta: f64,
    /// Outer (alternating) iterations.
    #[arg(long, default_value_t = 30)]
    pub outer: usize,
    /// Coefficient-solver iterations per outer step.
    #[arg(long, default_value_t = 100)]
    pub inner_iters: usize,
    /// Relative objective-change stop for the coefficient solver.
    #[arg(long, default_value_t = 1e-6)]
    pub inner_tol: f64,
    #[arg(long, value_enum, default_value_t = Mode::Fista)]
    pub mode: Mode,
    /// Step-size safety factor (≥ 1).
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Dictionary initialization seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn config(args: &TrainArgs) -> TrainConfig {
    let mut cfg = TrainConfig::new(args.atoms, args.beta);
    cfg.outer_iters = args.outer;
    cfg.seed = args.seed;
    cfg.inner.max_iters = args.inner_iters;
    cfg.inner.rel_tol = args.inner_tol;
    cfg.inner.mode = args.mode.into();
    cfg.inner.eta = args.eta;
    cfg
}

pub fn run(args: &TrainArgs, threads: usize) -> CliResult<()> {
    let cfg = config(args);
    cfg.validate()?;
    let patches = t3b::read(&args.input)?;

    let mut manifest = ManifestBuilder::new(
        "train",
        threads,
        json!({
            "atoms": args.atoms,
            "beta": args.beta,
            "outer": args.outer,
            "inner_iters": args.inner_iters,
            "inner_tol": args.inner_tol,
            "mode": format!("{:?}", args.mode),
            "eta": args.eta,
            "seed": args.seed,
        }),
    );
    manifest.input(&args.input);

    let (dict, coeffs, trace) = train(&patches, &cfg)?;

    let dead = dead_atoms(&coeffs);
    if !dead.is_empty() {
        eprintln!("train: {} dead atom(s): {:?}", dead.len(), dead);
    }
    if let Some(last) = trace.last() {
        eprintln!(
            "train: {} outer iterations, objective {:.6e}, sparsity {:.3}",
            trace.len(),
            last.objective,
            last.sparsity
        );
    }

    ensure_dir(&args.out)?;
    let dict_path = args.out.join("dict.t3b");
    let coeff_path = args.out.join("coeffs.t3b");
    let trace_path = args.out.join("trace.csv");
    t3b::write(&dict_path, &dict)?;
    t3b::write(&coeff_path, &coeffs)?;
    write_train_trace(&trace_path, &trace)?;
    manifest.output(&dict_path);
    manifest.output(&coeff_path);
    manifest.output(&trace_path);
    manifest.write(&args.out)
}
