//! `sc2d`: two-dimensional sparse coding over the tensor product.
//!
//! Exit codes: 0 success, 1 failed verification (`check`/`bench`), 2 bad
//! arguments, 3 I/O failure, 4 solver failure.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sc2d_cli::commands;
use sc2d_cli::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "sc2d", version, about = "Tensor-product sparse coding and multi-band denoising")]
struct Cli {
    /// Worker pool size for parallel sections (env fallback: SC2D_THREADS;
    /// default: all cores). Outputs are identical for every value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Learn a dictionary from a patch tensor.
    Train(commands::train::TrainArgs),
    /// Solve for sparse coefficients against a fixed dictionary.
    Encode(commands::encode::EncodeArgs),
    /// Denoise a multi-band image with a self-trained dictionary.
    Denoise(commands::denoise::DenoiseArgs),
    /// Tensorize a band-stack into training patches.
    ExtractPatches(commands::extract::ExtractArgs),
    /// PSNR/SSIM between two band-stacks.
    Metrics(commands::metrics::MetricsArgs),
    /// Run the randomized oracle suite.
    Check(commands::check::CheckArgs),
    /// Measure encode scaling and dense-path parity.
    Bench(commands::bench::BenchArgs),
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, String> {
    if let Some(n) = flag {
        if n == 0 {
            return Err("--threads must be at least 1".to_string());
        }
        return Ok(n);
    }
    if let Ok(var) = std::env::var("SC2D_THREADS") {
        let n: usize = var
            .parse()
            .map_err(|_| format!("SC2D_THREADS={var} is not a positive integer"))?;
        if n == 0 {
            return Err("SC2D_THREADS must be at least 1".to_string());
        }
        return Ok(n);
    }
    Ok(std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1))
}

fn dispatch(command: &Command, threads: usize) -> CliResult<()> {
    match command {
        Command::Train(args) => commands::train::run(args, threads),
        Command::Encode(args) => commands::encode::run(args, threads),
        Command::Denoise(args) => commands::denoise::run(args, threads),
        Command::ExtractPatches(args) => commands::extract::run(args, threads),
        Command::Metrics(args) => commands::metrics::run(args),
        Command::Check(args) => commands::check::run(args),
        Command::Bench(args) => commands::bench::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match resolve_threads(cli.threads) {
        Ok(n) => n,
        Err(msg) => {
            eprintln!("sc2d: {msg}");
            return ExitCode::from(2);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("sc2d: failed to build worker pool: {e}");
            return ExitCode::from(4);
        }
    };
    match pool.install(|| dispatch(&cli.command, threads)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("sc2d: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
