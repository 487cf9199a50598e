//! Cross-checks of the fast paths against independent slow references:
//! dense spectral bounds, finite differences, brute-force dual evaluation,
//! and projected gradient ascent.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sc2d_core::dict::{
    build_cache, dict_update, dual_grad_hess, dual_value, newton_solve, recover_dhat, LAMBDA_MIN,
};
use sc2d_core::oracle::{dense_sc_objective, numerical_gradient, tprod_naive};
use sc2d_core::solver::objective_parts;
use sc2d_core::{
    dft3, grad_f, ista_t_from, lipschitz, objective, soft_threshold, tprod, SolverConfig,
    SolverMode, Tensor3,
};

fn random_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize) -> Tensor3 {
    let data = (0..m * n * k).map(|_| rng.random_range(-1.0..1.0)).collect();
    Tensor3::from_data(m, n, k, data).unwrap()
}

fn random_sparse_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize, fill: f64) -> Tensor3 {
    let data = (0..m * n * k)
        .map(|_| {
            if rng.random_range(0.0..1.0) < fill {
                rng.random_range(-1.0f64..1.0)
            } else {
                0.0
            }
        })
        .collect();
    Tensor3::from_data(m, n, k, data).unwrap()
}

fn normalize_atoms(d: &mut Tensor3) {
    let norms = d.atom_norms();
    let (m, r, k) = d.dims();
    for j in 0..r {
        if norms[j] == 0.0 {
            continue;
        }
        for l in 0..k {
            for i in 0..m {
                let v = d.get(i, j, l) / norms[j];
                d.set(i, j, l, v);
            }
        }
    }
}

#[test]
fn naive_product_matches_circulant_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..40 {
        let m = rng.random_range(1..=5);
        let r = rng.random_range(1..=5);
        let n = rng.random_range(1..=5);
        let k = rng.random_range(1..=7);
        let a = random_tensor(&mut rng, m, r, k);
        let b = random_tensor(&mut rng, r, n, k);
        let slow = tprod_naive(&a, &b).unwrap();
        let dense = Tensor3::fold(&a.circulant_unfold().mul(&b.unfold()), k).unwrap();
        let err = slow.sub(&dense).unwrap().fro_norm() / dense.fro_norm().max(1.0);
        assert!(err <= 1e-10, "relative error {err}");
    }
}

#[test]
fn lipschitz_bound_dominates_dense_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..25 {
        let m = rng.random_range(1..=5);
        let r = rng.random_range(1..=4);
        let k = rng.random_range(1..=6);
        let d = random_tensor(&mut rng, m, r, k);
        if d.is_zero() {
            continue;
        }
        let bound = lipschitz(&d).unwrap();
        let c = d.circulant_unfold();
        let cm = DMatrix::from_column_slice(c.rows(), c.cols(), c.data());
        let gram = cm.transpose() * &cm;
        let eig = gram.symmetric_eigen();
        let top = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
        assert!(
            bound >= top - 1e-9 * top.max(1.0),
            "bound {bound} below spectral norm {top}"
        );
    }
}

#[test]
fn lipschitz_validity_on_gradient_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let d = random_tensor(&mut rng, 4, 3, 5);
    let x = random_tensor(&mut rng, 4, 6, 5);
    let lip = lipschitz(&d).unwrap();
    for _ in 0..100 {
        let b = random_tensor(&mut rng, 3, 6, 5);
        let c = random_tensor(&mut rng, 3, 6, 5);
        let gb = grad_f(&d, &b, &x).unwrap();
        let gc = grad_f(&d, &c, &x).unwrap();
        let lhs = gb.sub(&gc).unwrap().fro_norm();
        let rhs = lip * b.sub(&c).unwrap().fro_norm();
        assert!(lhs <= rhs * (1.0 + 1e-9), "{lhs} > {rhs}");
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    for _ in 0..10 {
        let m = rng.random_range(1..=4);
        let r = rng.random_range(1..=4);
        let n = rng.random_range(1..=4);
        let k = rng.random_range(1..=5);
        let d = random_tensor(&mut rng, m, r, k);
        if d.is_zero() {
            continue;
        }
        let x = random_tensor(&mut rng, m, n, k);
        let b = random_tensor(&mut rng, r, n, k);
        let analytic = grad_f(&d, &b, &x).unwrap();
        let data_term = |t: &Tensor3| {
            let fit = tprod(&d, t).unwrap();
            0.5 * x.sub(&fit).unwrap().fro_norm_sq()
        };
        let numeric = numerical_gradient(data_term, &b, 1e-5);
        let err = analytic.sub(&numeric).unwrap().fro_norm() / numeric.fro_norm().max(1.0);
        assert!(err <= 1e-5, "relative error {err}");
    }
}

#[test]
fn tensor_objective_matches_dense_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    for _ in 0..20 {
        let m = rng.random_range(1..=4);
        let r = rng.random_range(1..=4);
        let n = rng.random_range(1..=4);
        let k = rng.random_range(1..=6);
        let d = random_tensor(&mut rng, m, r, k);
        let b = random_tensor(&mut rng, r, n, k);
        let x = random_tensor(&mut rng, m, n, k);
        let beta = rng.random_range(0.01..1.0);
        let tensor_obj = objective(&x, &d, &b, beta).unwrap();
        let dense_obj = dense_sc_objective(&x.unfold(), &d.circulant_unfold(), &b.unfold(), beta);
        // the unfolded l1 mass counts each tube entry once, the circulant
        // data term reproduces the tensor product exactly
        let err = (tensor_obj - dense_obj).abs() / dense_obj.abs().max(1.0);
        assert!(err <= 1e-10, "relative error {err}");
    }
}

#[test]
fn stationary_point_does_not_move() {
    // pick a dictionary whose expansion is well conditioned, so the
    // iteration contracts fast enough to certify stationarity to 1e-10
    let mut rng = ChaCha8Rng::seed_from_u64(600);
    let (d, x) = loop {
        let mut d = random_tensor(&mut rng, 4, 3, 3);
        normalize_atoms(&mut d);
        let x = random_tensor(&mut rng, 4, 2, 3);
        let c = d.circulant_unfold();
        let cm = DMatrix::from_column_slice(c.rows(), c.cols(), c.data());
        let eigs = (cm.transpose() * &cm).symmetric_eigen().eigenvalues;
        let lo = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if lo / lipschitz(&d).unwrap() >= 0.02 {
            break (d, x);
        }
    };
    let beta = 0.3;
    let mut cfg = SolverConfig::new(beta);
    cfg.mode = SolverMode::Ista;
    cfg.max_iters = 20_000;
    cfg.rel_tol = 0.0;
    let zero = Tensor3::zeros(3, 2, 3);
    let (b_star, _) = ista_t_from(&x, &d, &zero, &cfg).unwrap();

    // prox-stationarity residual at the solve's end
    let lip = lipschitz(&d).unwrap();
    let g = grad_f(&d, &b_star, &x).unwrap();
    let moved = soft_threshold(&b_star.add_scaled(&g, -1.0 / lip).unwrap(), beta / lip);
    let residual = moved.sub(&b_star).unwrap().fro_norm();
    assert!(residual <= 1e-10, "not stationary: residual {residual}");

    cfg.max_iters = 5;
    let (b_again, _) = ista_t_from(&x, &d, &b_star, &cfg).unwrap();
    let movement = b_again.sub(&b_star).unwrap().fro_norm();
    assert!(movement <= 1e-9, "moved {movement} from a fixed point");
}

/// Brute-force evaluation of the Lagrangian at its inner minimizer, solved
/// per slice with an independent dense LU factorization.
fn lagrangian_min_brute(x: &Tensor3, b: &Tensor3, lambda: &[f64]) -> f64 {
    let fx = dft3(x);
    let fb = dft3(b);
    let k = x.k();
    let m = x.m();
    let r = b.m();
    let n = x.n();
    let to_na = |s: &sc2d_core::CMat, rows: usize, cols: usize| {
        DMatrix::from_fn(rows, cols, |i, j| {
            let z = s.get(i, j);
            Complex::new(z.re, z.im)
        })
    };
    let mut total = 0.0;
    for l in 0..k {
        let xs = to_na(fx.slice(l), m, n);
        let bs = to_na(fb.slice(l), r, n);
        let gram = &bs * bs.adjoint();
        let mut system = gram.clone();
        for j in 0..r {
            system[(j, j)] += Complex::new(lambda[j], 0.0);
        }
        let cross = &xs * bs.adjoint(); // m × r
        // D̂ = cross · system⁻¹  ⇔  system · D̂ᴴ = crossᴴ
        let dh = system
            .lu()
            .solve(&cross.adjoint())
            .expect("slice system invertible");
        let dhat = dh.adjoint();
        let resid = &xs - &dhat * &bs;
        total += resid.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for j in 0..r {
            let col_sq: f64 = dhat.column(j).iter().map(|z| z.norm_sqr()).sum();
            total += lambda[j] * col_sq;
        }
    }
    total -= k as f64 * lambda.iter().sum::<f64>();
    total
}

#[test]
fn dual_value_matches_brute_force_inner_minimization() {
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    for _ in 0..10 {
        let m = rng.random_range(2..=4);
        let r = rng.random_range(1..=3);
        let n = rng.random_range(2..=5);
        let k = rng.random_range(1..=5);
        let x = random_tensor(&mut rng, m, n, k);
        let b = random_tensor(&mut rng, r, n, k);
        let lambda: Vec<f64> = (0..r).map(|_| rng.random_range(0.2..2.0)).collect();
        let cache = build_cache(&x, &b).unwrap();
        let fast = dual_value(&cache, &lambda).unwrap();
        let slow = lagrangian_min_brute(&x, &b, &lambda);
        let err = (fast - slow).abs() / slow.abs().max(1.0);
        assert!(err <= 1e-8, "dual {fast} vs brute {slow}");
    }
}

#[test]
fn dual_gradient_matches_finite_differences_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    for _ in 0..10 {
        let m = rng.random_range(2..=4);
        let r = rng.random_range(1..=3);
        let n = rng.random_range(2..=5);
        let k = rng.random_range(1..=5);
        let x = random_tensor(&mut rng, m, n, k);
        let b = random_tensor(&mut rng, r, n, k);
        let lambda: Vec<f64> = (0..r).map(|_| rng.random_range(0.3..1.5)).collect();
        let cache = build_cache(&x, &b).unwrap();
        let (grad, _) = dual_grad_hess(&cache, &lambda).unwrap();
        let h = 1e-5;
        for j in 0..r {
            let mut up = lambda.clone();
            up[j] += h;
            let mut dn = lambda.clone();
            dn[j] -= h;
            let fd =
                (dual_value(&cache, &up).unwrap() - dual_value(&cache, &dn).unwrap()) / (2.0 * h);
            let err = (grad[j] - fd).abs() / grad[j].abs().max(1.0);
            assert!(err <= 1e-5, "atom {j}: {} vs {}", grad[j], fd);
        }
    }
}

/// Projected gradient ascent on the dual: slow and safe.
fn dual_ascent_oracle(
    cache: &sc2d_core::dict::SliceCache,
    r: usize,
    iters: usize,
) -> (Vec<f64>, f64) {
    let mut lambda = vec![1.0f64; r];
    let mut value = dual_value(cache, &lambda).unwrap();
    let mut step = 0.5;
    for _ in 0..iters {
        let (grad, _) = dual_grad_hess(cache, &lambda).unwrap();
        let mut improved = false;
        for _ in 0..60 {
            let cand: Vec<f64> = lambda
                .iter()
                .zip(grad.iter())
                .map(|(l, g)| (l + step * g).max(LAMBDA_MIN))
                .collect();
            let v = dual_value(cache, &cand).unwrap();
            if v > value {
                lambda = cand;
                value = v;
                improved = true;
                step *= 1.3;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (lambda, value)
}

#[test]
fn newton_matches_gradient_ascent_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    for trial in 0..6 {
        let m = rng.random_range(2..=4);
        let r = rng.random_range(1..=3);
        let n = rng.random_range(3..=6);
        let k = rng.random_range(1..=5);
        let x = random_tensor(&mut rng, m, n, k).scale(2.0);
        let b = random_tensor(&mut rng, r, n, k);
        let cache = build_cache(&x, &b).unwrap();
        let state = newton_solve(&cache, &vec![1.0; r]).unwrap();
        assert!(state.converged, "trial {trial}: newton did not converge");
        let (_, ascent_value) = dual_ascent_oracle(&cache, r, 4000);
        let gap = (state.dual_value - ascent_value).abs() / ascent_value.abs().max(1.0);
        assert!(
            state.dual_value >= ascent_value - 1e-6 * ascent_value.abs().max(1.0),
            "trial {trial}: newton {} below ascent {}",
            state.dual_value,
            ascent_value
        );
        assert!(gap <= 1e-6, "trial {trial}: dual gap {gap}");

        // the recovered dictionary satisfies every atom constraint
        let fd = recover_dhat(&cache, &state.lambda).unwrap();
        let d = sc2d_core::idft3(&fd).unwrap();
        for norm in d.atom_norms() {
            assert!(norm * norm <= 1.0 + 1e-8);
        }
    }
}

#[test]
fn weak_duality_against_feasible_dictionaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    for _ in 0..20 {
        let m = rng.random_range(2..=4);
        let r = rng.random_range(1..=3);
        let n = rng.random_range(2..=5);
        let k = rng.random_range(1..=5);
        let x = random_tensor(&mut rng, m, n, k);
        let b = random_tensor(&mut rng, r, n, k);
        let cache = build_cache(&x, &b).unwrap();
        let lambda: Vec<f64> = (0..r).map(|_| rng.random_range(0.0..2.0)).collect();
        let dual = dual_value(&cache, &lambda).unwrap();
        for _ in 0..5 {
            let mut d = random_tensor(&mut rng, m, r, k);
            normalize_atoms(&mut d);
            // frequency-domain primal: k times the time-domain fit
            let primal = k as f64 * tprod(&d, &b).unwrap().sub(&x).unwrap().fro_norm_sq();
            assert!(
                dual <= primal + 1e-9 * primal.max(1.0),
                "dual {dual} exceeds primal {primal}"
            );
        }
    }
}

#[test]
fn dict_update_monotone_over_seeds() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1100 + seed);
        let m = 4;
        let r = 3;
        let n = 14;
        let k = 4;
        let x = random_tensor(&mut rng, m, n, k);
        let b = random_sparse_tensor(&mut rng, r, n, k, 0.4);
        let mut incumbent = random_tensor(&mut rng, m, r, k);
        normalize_atoms(&mut incumbent);
        let before = objective(&x, &incumbent, &b, 0.0).unwrap();
        let (d, _) = dict_update(&x, &b, &incumbent, &[1.0, 1.0, 1.0]).unwrap();
        let after = objective(&x, &d, &b, 0.0).unwrap();
        assert!(
            after <= before + 1e-9 * before.max(1.0),
            "seed {seed}: {before} -> {after}"
        );
    }
}

#[test]
fn perturbing_one_spectrum_slice_only_moves_that_dictionary_slice() {
    let mut rng = ChaCha8Rng::seed_from_u64(1200);
    let m = 3;
    let r = 2;
    let n = 6;
    let k = 5;
    let x = random_tensor(&mut rng, m, n, k);
    let b = random_tensor(&mut rng, r, n, k);
    let lambda = vec![0.8, 1.1];

    // perturb unique slice 1 of B̂ (and its mirror, to stay real)
    let fb = dft3(&b);
    let mut slices: Vec<sc2d_core::CMat> = fb.slices().to_vec();
    let bump = num_complex::Complex64::new(0.21, -0.13);
    let old = slices[1].get(0, 0);
    slices[1].set(0, 0, old + bump);
    let old_m = slices[k - 1].get(0, 0);
    slices[k - 1].set(0, 0, old_m + bump.conj());
    let b2 = sc2d_core::idft3(&sc2d_core::FreqTensor::from_slices(slices, true).unwrap()).unwrap();

    let d1 = recover_dhat(&build_cache(&x, &b).unwrap(), &lambda).unwrap();
    let d2 = recover_dhat(&build_cache(&x, &b2).unwrap(), &lambda).unwrap();
    for l in 0..k {
        let diff: f64 = d1
            .slice(l)
            .data()
            .iter()
            .zip(d2.slice(l).data().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if l == 1 || l == k - 1 {
            assert!(diff > 1e-6, "slice {l} should have moved");
        } else {
            assert!(diff <= 1e-10, "slice {l} moved by {diff}");
        }
    }
}

#[test]
fn complementary_slackness_at_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(1300);
    for _ in 0..8 {
        let m = rng.random_range(2..=4);
        let r = rng.random_range(1..=3);
        let n = rng.random_range(3..=6);
        let k = rng.random_range(1..=5);
        let x = random_tensor(&mut rng, m, n, k).scale(1.5);
        let b = random_tensor(&mut rng, r, n, k);
        let cache = build_cache(&x, &b).unwrap();
        let state = newton_solve(&cache, &vec![1.0; r]).unwrap();
        assert!(state.converged);
        assert!(state.grad_norm <= 1e-7);
        assert!(
            state.slack_residual <= 1e-6,
            "slackness residual {}",
            state.slack_residual
        );
    }
}

#[test]
fn solver_objective_parts_recombine() {
    let mut rng = ChaCha8Rng::seed_from_u64(1400);
    let d = random_tensor(&mut rng, 3, 2, 4);
    let b = random_tensor(&mut rng, 2, 5, 4);
    let x = random_tensor(&mut rng, 3, 5, 4);
    let beta = 0.37;
    let (data, l1) = objective_parts(&x, &d, &b).unwrap();
    let whole = objective(&x, &d, &b, beta).unwrap();
    assert!((data + beta * l1 - whole).abs() <= 1e-12 * whole.max(1.0));
}
