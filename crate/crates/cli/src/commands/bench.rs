//! `sc2d bench`: wall-clock scaling of the encode path.
//!
//! Times fixed-iteration solves while doubling the sample count and checks
//! the near-linear envelope, plus a speed-parity comparison against the
//! dense path at `k = 1`. Emits one CSV row per measurement.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sc2d_core::oracle::dense_ista;
use sc2d_core::{ista_t, SolverConfig, SolverMode, Tensor3};

use crate::error::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 16)]
    pub m: usize,
    #[arg(long, default_value_t = 12)]
    pub r: usize,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Base sample count; doubled `--doublings` times.
    #[arg(long, default_value_t = 1500)]
    pub n0: usize,
    #[arg(long, default_value_t = 2)]
    pub doublings: usize,
    /// Fixed iteration count per solve.
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
    #[arg(long, default_value_t = 9)]
    pub seed: u64,
    /// CSV output (`m,r,k,n,iters,seconds`).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn random_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize) -> Tensor3 {
    let data = (0..m * n * k).map(|_| rng.random_range(-1.0..1.0)).collect();
    Tensor3::from_data(m, n, k, data).unwrap()
}

fn fastest_of_three(mut solve: impl FnMut()) -> f64 {
    solve(); // warm-up
    (0..3)
        .map(|_| {
            let t = Instant::now();
            solve();
            t.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn run(args: &BenchArgs) -> CliResult<()> {
    if args.m == 0 || args.r == 0 || args.k == 0 || args.n0 == 0 || args.iters == 0 {
        return Err(CliError::Usage(
            "bench extents and iteration count must be positive".to_string(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let dict = random_tensor(&mut rng, args.m, args.r, args.k);
    let mut cfg = SolverConfig::new(0.05);
    cfg.max_iters = args.iters;
    cfg.rel_tol = 0.0;
    cfg.mode = SolverMode::Fista;

    let mut csv = String::from("m,r,k,n,iters,seconds\n");
    let mut times = Vec::new();
    let mut n = args.n0;
    for _ in 0..=args.doublings {
        let x = random_tensor(&mut rng, args.m, n, args.k);
        let seconds = fastest_of_three(|| {
            let _ = ista_t(&x, &dict, &cfg).unwrap();
        });
        println!(
            "encode m={} r={} k={} n={} iters={}: {:.4}s",
            args.m, args.r, args.k, n, args.iters, seconds
        );
        csv.push_str(&format!(
            "{},{},{},{},{},{:.6}\n",
            args.m, args.r, args.k, n, args.iters, seconds
        ));
        times.push(seconds);
        n *= 2;
    }

    let mut all_passed = true;
    for pair in times.windows(2) {
        let ratio = pair[1] / pair[0];
        let ok = (1.6..=2.6).contains(&ratio);
        all_passed &= ok;
        println!(
            "doubling ratio {:.2}x in [1.6, 2.6]: {}",
            ratio,
            if ok { "PASS" } else { "FAIL" }
        );
    }

    // dense-path parity at k = 1
    let d1 = random_tensor(&mut rng, args.m, args.r, 1);
    let x1 = random_tensor(&mut rng, args.m, args.n0, 1);
    let tensor_time = fastest_of_three(|| {
        let _ = ista_t(&x1, &d1, &cfg).unwrap();
    });
    let dense_d = d1.circulant_unfold();
    let dense_x = x1.unfold();
    let dense_time = fastest_of_three(|| {
        let _ = dense_ista(&dense_x, &dense_d, 0.05, args.iters, 0.0);
    });
    let parity = (tensor_time / dense_time).max(dense_time / tensor_time);
    let parity_ok = parity <= 5.0;
    all_passed &= parity_ok;
    println!(
        "k=1 parity: tensor {:.4}s vs dense {:.4}s, factor {:.2} ≤ 5: {}",
        tensor_time,
        dense_time,
        parity,
        if parity_ok { "PASS" } else { "FAIL" }
    );

    if let Some(path) = &args.out {
        fs::write(path, csv).map_err(|e| CliError::io_at(path, e))?;
    }
    if !all_passed {
        return Err(CliError::CheckFailed(
            "bench envelope violated".to_string(),
        ));
    }
    Ok(())
}
