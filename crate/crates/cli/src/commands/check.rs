//! `sc2d check`: randomized oracle suite for the fast paths.
//!
//! Runs the expansion-equivalence, naive-convolution, gradient, dual, and
//! energy-conservation checks on seeded random instances and prints one
//! table row per check. Exit code 0 iff every check passes.

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sc2d_core::dict::{build_cache, dual_grad_hess, dual_value};
use sc2d_core::oracle::{numerical_gradient, tprod_naive};
use sc2d_core::{dft3, grad_f, tprod, Tensor3};

use crate::error::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Random instances per check.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Corrupt one comparison on purpose; the run must then fail.
    #[arg(long)]
    pub inject_failure: bool,
}

struct CheckRow {
    name: &'static str,
    trials: usize,
    max_err: f64,
    tol: f64,
}

impl CheckRow {
    fn passed(&self) -> bool {
        self.max_err <= self.tol
    }
}

fn random_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize) -> Tensor3 {
    let data = (0..m * n * k).map(|_| rng.random_range(-1.0..1.0)).collect();
    Tensor3::from_data(m, n, k, data).unwrap()
}

fn rel_gap(a: &Tensor3, b: &Tensor3) -> f64 {
    a.sub(b).unwrap().fro_norm() / b.fro_norm().max(1e-300)
}

pub fn run(args: &CheckArgs) -> CliResult<()> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut rows = Vec::new();

    // tensor product vs block-circulant expansion
    let mut worst = 0.0f64;
    for trial in 0..args.trials {
        let (m, r, n, k) = (
            rng.random_range(1..=6),
            rng.random_range(1..=6),
            rng.random_range(1..=6),
            rng.random_range(1..=8),
        );
        let a = random_tensor(&mut rng, m, r, k);
        let b = random_tensor(&mut rng, r, n, k);
        let mut fast = tprod(&a, &b).unwrap();
        if args.inject_failure && trial == 0 {
            let v = fast.get(0, 0, 0);
            fast.set(0, 0, 0, v + 1e-3);
        }
        let dense = Tensor3::fold(&a.circulant_unfold().mul(&b.unfold()), k).unwrap();
        worst = worst.max(rel_gap(&fast, &dense));
    }
    rows.push(CheckRow {
        name: "circulant-expansion",
        trials: args.trials,
        max_err: worst,
        tol: 1e-10,
    });

    // tensor product vs naive circular convolution
    let mut worst = 0.0f64;
    let naive_trials = args.trials.min(200);
    for _ in 0..naive_trials {
        let (m, r, n, k) = (
            rng.random_range(1..=5),
            rng.random_range(1..=5),
            rng.random_range(1..=5),
            rng.random_range(1..=7),
        );
        let a = random_tensor(&mut rng, m, r, k);
        let b = random_tensor(&mut rng, r, n, k);
        let fast = tprod(&a, &b).unwrap();
        let slow = tprod_naive(&a, &b).unwrap();
        worst = worst.max(rel_gap(&fast, &slow));
    }
    rows.push(CheckRow {
        name: "naive-convolution",
        trials: naive_trials,
        max_err: worst,
        tol: 1e-10,
    });

    // analytic gradient vs central differences
    let mut worst = 0.0f64;
    let grad_trials = args.trials.min(100);
    for _ in 0..grad_trials {
        let (m, r, n, k) = (
            rng.random_range(1..=4),
            rng.random_range(1..=4),
            rng.random_range(1..=4),
            rng.random_range(1..=5),
        );
        let d = random_tensor(&mut rng, m, r, k);
        if d.is_zero() {
            continue;
        }
        let x = random_tensor(&mut rng, m, n, k);
        let b = random_tensor(&mut rng, r, n, k);
        let analytic = grad_f(&d, &b, &x).unwrap();
        let numeric = numerical_gradient(
            |t| {
                let fit = tprod(&d, t).unwrap();
                0.5 * x.sub(&fit).unwrap().fro_norm_sq()
            },
            &b,
            1e-5,
        );
        worst = worst.max(
            analytic.sub(&numeric).unwrap().fro_norm() / numeric.fro_norm().max(1e-12),
        );
    }
    rows.push(CheckRow {
        name: "gradient-fd",
        trials: grad_trials,
        max_err: worst,
        tol: 1e-5,
    });

    // dual gradient vs central differences
    let mut worst = 0.0f64;
    let dual_trials = args.trials.min(100);
    for _ in 0..dual_trials {
        let (m, r, n, k) = (
            rng.random_range(2..=4),
            rng.random_range(1..=3),
            rng.random_range(2..=5),
            rng.random_range(1..=5),
        );
        let x = random_tensor(&mut rng, m, n, k);
        let b = random_tensor(&mut rng, r, n, k);
        let cache = build_cache(&x, &b).unwrap();
        let lambda: Vec<f64> = (0..r).map(|_| rng.random_range(0.3..1.5)).collect();
        let (grad, _) = dual_grad_hess(&cache, &lambda).unwrap();
        let h = 1e-5;
        for j in 0..r {
            let mut up = lambda.clone();
            up[j] += h;
            let mut dn = lambda.clone();
            dn[j] -= h;
            let fd = (dual_value(&cache, &up).unwrap() - dual_value(&cache, &dn).unwrap())
                / (2.0 * h);
            worst = worst.max((grad[j] - fd).abs() / grad[j].abs().max(1.0));
        }
    }
    rows.push(CheckRow {
        name: "dual-gradient-fd",
        trials: dual_trials,
        max_err: worst,
        tol: 1e-5,
    });

    // spectral energy conservation
    let mut worst = 0.0f64;
    for _ in 0..args.trials {
        let (m, n, k) = (
            rng.random_range(1..=6),
            rng.random_range(1..=6),
            rng.random_range(1..=8),
        );
        let x = random_tensor(&mut rng, m, n, k);
        let lhs = x.fro_norm_sq();
        let rhs = dft3(&x).fro_norm_sq() / k as f64;
        worst = worst.max((lhs - rhs).abs() / lhs.max(1e-300));
    }
    rows.push(CheckRow {
        name: "energy-conservation",
        trials: args.trials,
        max_err: worst,
        tol: 1e-10,
    });

    println!(
        "{:<22} {:>7} {:>12} {:>9} {:>7}",
        "check", "trials", "max_err", "tol", "status"
    );
    let mut all_passed = true;
    for row in &rows {
        let status = if row.passed() { "PASS" } else { "FAIL" };
        all_passed &= row.passed();
        println!(
            "{:<22} {:>7} {:>12.3e} {:>9.0e} {:>7}",
            row.name, row.trials, row.max_err, row.tol, status
        );
    }
    if !all_passed {
        return Err(CliError::CheckFailed(
            "one or more oracle checks failed".to_string(),
        ));
    }
    Ok(())
}
