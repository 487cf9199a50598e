//! Dictionary update with coefficients fixed.
//!
//! After a mode-3 DFT the constrained least-squares dictionary fit becomes
//! `k` independent complex ridge problems coupled only by the per-atom norm
//! budget `Σ_ℓ‖D̂^(ℓ)(:,j)‖² ≤ k` (the frequency-domain image of
//! `‖D(:,j,:)‖_F² ≤ 1` under the unnormalized transform). The coupling is
//! resolved through the Lagrange dual in the multipliers `λ ∈ R^r`:
//!
//! - for fixed `λ` the minimizer is `D̂^(ℓ) = Ĥ_ℓ(Ĝ_ℓ + Λ)⁻¹` with the slice
//!   Gram products `Ĝ_ℓ = B̂^(ℓ)B̂^(ℓ)ᴴ` and `Ĥ_ℓ = X̂^(ℓ)B̂^(ℓ)ᴴ`,
//! - the dual value is `Σ_ℓ(‖X̂^(ℓ)‖² − Tr(Ĥ_ℓ(Ĝ_ℓ+Λ)⁻¹Ĥ_ℓᴴ)) − k·Σ_j λ_j`,
//! - its gradient per atom is the constraint violation
//!   `Σ_ℓ‖D̂^(ℓ)(:,j)‖² − k`, and the Hessian entry `(i,j)` is
//!   `−2·Σ_ℓ Re[(Ĝ_ℓ+Λ)⁻¹(i,j)·(D̂^(ℓ)ᴴD̂^(ℓ))(j,i)]`.
//!
//! The dual is concave, so a clamped Newton ascent with backtracking
//! converges; both derivative formulas are validated against finite
//! differences in the test suites. Only the unique frequency slices are
//! solved; mirrored slices contribute through their multiplicity, and the
//! recovered spectrum is conjugate-symmetric by construction so the inverse
//! transform is real.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freq::{dft3, idft3, mirror_slice, slice_weight, unique_slices, FreqTensor};
use crate::mat::{solve_spd, CMat, Cholesky, Mat};
use crate::tensor::Tensor3;

/// Lower clamp for the dual variables; keeps every slice system invertible.
pub const LAMBDA_MIN: f64 = 1e-9;

/// Newton iteration cap.
pub const MAX_NEWTON_ITERS: usize = 100;

/// Projected-gradient tolerance per unit of `k` for declaring convergence.
pub const NEWTON_TOL_PER_K: f64 = 1e-9;

/// Result of maximizing the Lagrange dual.
#[derive(Debug, Clone)]
pub struct DualState {
    /// Dual variables, entrywise at least [`LAMBDA_MIN`].
    pub lambda: Vec<f64>,
    pub dual_value: f64,
    /// Max-norm of the projected dual gradient at exit.
    pub grad_norm: f64,
    /// False when the iteration cap was hit before the tolerance.
    pub converged: bool,
    /// Largest complementary-slackness product `|λ_j·(constraint_j − k)|`.
    pub slack_residual: f64,
}

/// Per-slice Gram products shared by every dual evaluation of one update.
#[derive(Debug, Clone)]
pub struct SliceCache {
    m: usize,
    r: usize,
    k: usize,
    /// `Ĝ_ℓ = B̂^(ℓ)B̂^(ℓ)ᴴ` for the unique slices; Hermitian PSD.
    gram: Vec<CMat>,
    /// `Ĥ_ℓ = X̂^(ℓ)B̂^(ℓ)ᴴ` for the unique slices.
    cross: Vec<CMat>,
    /// `Σ_ℓ‖X̂^(ℓ)‖²` over all `k` slices.
    x_energy: f64,
}

impl SliceCache {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.r, self.k)
    }

    pub fn gram_slice(&self, l: usize) -> &CMat {
        &self.gram[l]
    }

    pub fn cross_slice(&self, l: usize) -> &CMat {
        &self.cross[l]
    }

    /// Total spectral energy of the data, the constant term of the dual.
    pub fn x_energy(&self) -> f64 {
        self.x_energy
    }
}

/// Builds the per-slice products once per dictionary update.
pub fn build_cache(x: &Tensor3, b: &Tensor3) -> Result<SliceCache> {
    let (m, n, k) = x.dims();
    if b.n() != n || b.k() != k {
        return Err(Error::ShapeMismatch {
            op: "build_cache",
            lhs: x.dims(),
            rhs: b.dims(),
        });
    }
    let r = b.m();
    let fx = dft3(x);
    let fb = dft3(b);
    let u = unique_slices(k);
    let mut x_energy = 0.0;
    for l in 0..u {
        x_energy += slice_weight(l, k) * fx.slice(l).fro_norm_sq();
    }
    let idx: Vec<usize> = (0..u).collect();
    let build = |l: &usize| {
        let l = *l;
        let mut g = fb.slice(l).mul_conj_t(fb.slice(l));
        g.hermitianize();
        let h = fx.slice(l).mul_conj_t(fb.slice(l));
        (g, h)
    };
    #[cfg(feature = "parallel")]
    let pairs: Vec<(CMat, CMat)> = idx.par_iter().map(build).collect();
    #[cfg(not(feature = "parallel"))]
    let pairs: Vec<(CMat, CMat)> = idx.iter().map(build).collect();
    let (gram, cross) = pairs.into_iter().unzip();
    Ok(SliceCache {
        m,
        r,
        k,
        gram,
        cross,
        x_energy,
    })
}

/// Factors `Ĝ_ℓ + Λ`, retrying once with a trace-scaled jitter when the
/// clamped system is numerically rank deficient.
fn factor_slice(cache: &SliceCache, l: usize, lambda: &[f64]) -> Result<Cholesky> {
    let mut m = cache.gram[l].clone();
    m.add_diag(lambda);
    if let Some(c) = Cholesky::new(&m) {
        return Ok(c);
    }
    let jitter = 1e-10 * (m.trace_real_diag() / cache.r as f64).max(f64::MIN_POSITIVE);
    m.add_scalar_diag(jitter);
    Cholesky::new(&m).ok_or(Error::SingularSlice { slice: l })
}

/// `D̂^(ℓ) = Ĥ_ℓ(Ĝ_ℓ + Λ)⁻¹` for one unique slice.
fn solve_slice(cache: &SliceCache, l: usize, lambda: &[f64]) -> Result<CMat> {
    if cache.cross[l].data().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Ok(CMat::zeros(cache.m, cache.r));
    }
    let chol = factor_slice(cache, l, lambda)?;
    let mut w = cache.cross[l].conj_t(); // r × m
    chol.solve_in_place(&mut w);
    Ok(w.conj_t())
}

/// Recovers the full conjugate-symmetric dictionary spectrum at the given
/// multipliers.
pub fn recover_dhat(cache: &SliceCache, lambda: &[f64]) -> Result<FreqTensor> {
    assert_eq!(lambda.len(), cache.r, "one multiplier per atom");
    let u = unique_slices(cache.k);
    let idx: Vec<usize> = (0..u).collect();
    #[cfg(feature = "parallel")]
    let solved: Vec<Result<CMat>> = idx.par_iter().map(|l| solve_slice(cache, *l, lambda)).collect();
    #[cfg(not(feature = "parallel"))]
    let solved: Vec<Result<CMat>> = idx.iter().map(|l| solve_slice(cache, *l, lambda)).collect();
    let mut slices: Vec<CMat> = Vec::with_capacity(cache.k);
    for s in solved {
        slices.push(s?);
    }
    for l in u..cache.k {
        slices.push(slices[mirror_slice(l, cache.k)].conj());
    }
    FreqTensor::from_slices(slices, true)
}

/// Per-atom constraint values `Σ_ℓ‖D̂^(ℓ)(:,j)‖²` at the given multipliers.
pub fn constraint_values(cache: &SliceCache, lambda: &[f64]) -> Result<Vec<f64>> {
    let u = unique_slices(cache.k);
    let mut vals = vec![0.0; cache.r];
    for l in 0..u {
        let d = solve_slice(cache, l, lambda)?;
        let w = slice_weight(l, cache.k);
        for (j, v) in vals.iter_mut().enumerate() {
            *v += w * d.col_norm_sq(j);
        }
    }
    Ok(vals)
}

/// Lagrange dual value at `λ ≥ 0`.
pub fn dual_value(cache: &SliceCache, lambda: &[f64]) -> Result<f64> {
    assert_eq!(lambda.len(), cache.r);
    let u = unique_slices(cache.k);
    let mut fit = 0.0;
    for l in 0..u {
        if cache.cross[l].data().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            continue;
        }
        let chol = factor_slice(cache, l, lambda)?;
        let mut w = cache.cross[l].conj_t(); // r × m, becomes (Ĝ+Λ)⁻¹Ĥᴴ
        chol.solve_in_place(&mut w);
        // Re Tr(Ĥ · W)
        let mut tr = 0.0;
        for i in 0..cache.m {
            for q in 0..cache.r {
                let prod = cache.cross[l].get(i, q) * w.get(q, i);
                tr += prod.re;
            }
        }
        fit += slice_weight(l, cache.k) * tr;
    }
    let penalty: f64 = lambda.iter().sum::<f64>() * cache.k as f64;
    Ok(cache.x_energy - fit - penalty)
}

/// Analytic gradient and Hessian of the dual.
///
/// Gradient entry `j` is the constraint violation of atom `j`; the Hessian is
/// negative semidefinite because the dual is concave.
pub fn dual_grad_hess(cache: &SliceCache, lambda: &[f64]) -> Result<(Vec<f64>, Mat)> {
    assert_eq!(lambda.len(), cache.r);
    let u = unique_slices(cache.k);
    let r = cache.r;
    let mut grad = vec![0.0; r];
    let mut hess = Mat::zeros(r, r);
    for l in 0..u {
        let w = slice_weight(l, cache.k);
        let chol = factor_slice(cache, l, lambda)?;
        let d = if cache.cross[l].data().iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            CMat::zeros(cache.m, r)
        } else {
            let mut z = cache.cross[l].conj_t();
            chol.solve_in_place(&mut z);
            z.conj_t()
        };
        for (j, g) in grad.iter_mut().enumerate() {
            *g += w * d.col_norm_sq(j);
        }
        let minv = chol.inverse();
        let p = d.conj_t_mul(&d); // D̂ᴴD̂, r × r
        for j in 0..r {
            for i in 0..r {
                let v = hess.get(i, j) - 2.0 * w * (minv.get(i, j) * p.get(j, i)).re;
                hess.set(i, j, v);
            }
        }
    }
    for g in grad.iter_mut() {
        *g -= cache.k as f64;
    }
    Ok((grad, hess))
}

/// Maximizes the dual by clamped Newton ascent with an Armijo backtracking
/// line search. Returns the best iterate with `converged = false` when the
/// iteration cap is reached.
pub fn newton_solve(cache: &SliceCache, lambda0: &[f64]) -> Result<DualState> {
    assert_eq!(lambda0.len(), cache.r);
    let r = cache.r;
    let kf = cache.k as f64;
    let tol = NEWTON_TOL_PER_K * kf.max(1.0);
    let mut lambda: Vec<f64> = lambda0.iter().map(|v| v.max(LAMBDA_MIN)).collect();
    let mut value = dual_value(cache, &lambda)?;
    let mut converged = false;
    let mut grad_norm = f64::INFINITY;

    for _ in 0..MAX_NEWTON_ITERS {
        let (grad, hess) = dual_grad_hess(cache, &lambda)?;
        let free: Vec<usize> = (0..r)
            .filter(|&j| lambda[j] > LAMBDA_MIN * (1.0 + 1e-12) || grad[j] > 0.0)
            .collect();
        grad_norm = free.iter().fold(0.0f64, |m, &j| m.max(grad[j].abs()));
        if grad_norm <= tol {
            converged = true;
            break;
        }
        let nf = free.len();
        // ascent direction from the free-set Newton system (−H)Δ = g
        let mut neg_h = Mat::zeros(nf, nf);
        let mut g_free = vec![0.0; nf];
        let mut max_diag = 0.0f64;
        for (a, &ja) in free.iter().enumerate() {
            g_free[a] = grad[ja];
            for (b, &jb) in free.iter().enumerate() {
                neg_h.set(a, b, -hess.get(ja, jb));
            }
            max_diag = max_diag.max(neg_h.get(a, a));
        }
        let ridge = 1e-12 * max_diag.max(1e-30);
        for a in 0..nf {
            let v = neg_h.get(a, a) + ridge;
            neg_h.set(a, a, v);
        }
        let direction = match solve_spd(&neg_h, &g_free) {
            Some(d) => d,
            None => {
                // concavity lost to roundoff; fall back to a scaled gradient step
                let scale = max_diag.max(1.0);
                g_free.iter().map(|g| g / scale).collect()
            }
        };
        let dir_deriv: f64 = g_free.iter().zip(direction.iter()).map(|(g, d)| g * d).sum();

        let mut alpha = 1.0f64;
        let mut accepted = false;
        for _ in 0..30 {
            let mut candidate = lambda.clone();
            for (a, &j) in free.iter().enumerate() {
                candidate[j] = (lambda[j] + alpha * direction[a]).max(LAMBDA_MIN);
            }
            let cand_value = dual_value(cache, &candidate)?;
            if cand_value >= value + 1e-4 * alpha * dir_deriv - 1e-12 * value.abs().max(1.0) {
                if candidate == lambda {
                    break;
                }
                lambda = candidate;
                value = cand_value;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    let constraints = constraint_values(cache, &lambda)?;
    let slack_residual = lambda
        .iter()
        .zip(constraints.iter())
        .fold(0.0f64, |m, (l, c)| m.max((l * (c - kf)).abs()));
    Ok(DualState {
        lambda,
        dual_value: value,
        grad_norm,
        converged,
        slack_residual,
    })
}

/// Atoms whose coefficient rows are identically zero. Dead atoms are
/// reported, never replaced.
pub fn dead_atoms(b: &Tensor3) -> Vec<usize> {
    let (r, n, k) = b.dims();
    let mut dead = vec![true; r];
    for l in 0..k {
        for j in 0..n {
            for q in 0..r {
                if dead[q] && b.get(q, j, l) != 0.0 {
                    dead[q] = false;
                }
            }
        }
    }
    dead.iter()
        .enumerate()
        .filter_map(|(q, d)| if *d { Some(q) } else { None })
        .collect()
}

/// Full dictionary update: maximize the dual from `lambda0`, recover the
/// spectrum, and invert to a real dictionary. An all-zero `B` leaves the
/// incumbent unchanged (`None` signals the skipped update).
pub fn dict_update(
    x: &Tensor3,
    b: &Tensor3,
    incumbent: &Tensor3,
    lambda0: &[f64],
) -> Result<(Tensor3, Option<DualState>)> {
    if incumbent.dims() != (x.m(), b.m(), x.k()) {
        return Err(Error::ShapeMismatch {
            op: "dict_update",
            lhs: incumbent.dims(),
            rhs: (x.m(), b.m(), x.k()),
        });
    }
    if b.is_zero() {
        return Ok((incumbent.clone(), None));
    }
    let cache = build_cache(x, b)?;
    let state = newton_solve(&cache, lambda0)?;
    let fd = recover_dhat(&cache, &state.lambda)?;
    let d = idft3(&fd)?;
    Ok((d, Some(state)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freq::tprod;

    fn pseudo_tensor(m: usize, n: usize, k: usize, seed: u64) -> Tensor3 {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let data = (0..m * n * k).map(|_| next()).collect();
        Tensor3::from_data(m, n, k, data).unwrap()
    }

    #[test]
    fn cache_of_zero_coefficients_is_zero() {
        let x = pseudo_tensor(3, 4, 2, 1);
        let b = Tensor3::zeros(2, 4, 2);
        let cache = build_cache(&x, &b).unwrap();
        for l in 0..unique_slices(2) {
            assert_eq!(cache.gram_slice(l).fro_norm_sq(), 0.0);
            assert_eq!(cache.cross_slice(l).fro_norm_sq(), 0.0);
        }
    }

    #[test]
    fn cache_scalar_case() {
        let x = Tensor3::from_data(1, 1, 1, vec![3.0]).unwrap();
        let b = Tensor3::from_data(1, 1, 1, vec![-2.0]).unwrap();
        let cache = build_cache(&x, &b).unwrap();
        assert!((cache.gram_slice(0).get(0, 0).re - 4.0).abs() < 1e-14);
        assert!((cache.cross_slice(0).get(0, 0).re - -6.0).abs() < 1e-14);
    }

    #[test]
    fn gram_slices_hermitian() {
        let x = pseudo_tensor(3, 6, 5, 2);
        let b = pseudo_tensor(4, 6, 5, 3);
        let cache = build_cache(&x, &b).unwrap();
        for l in 0..unique_slices(5) {
            let g = cache.gram_slice(l);
            for j in 0..4 {
                for i in 0..4 {
                    assert!((g.get(i, j) - g.get(j, i).conj()).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn recover_with_zero_gram_returns_cross() {
        // B = 0 makes Ĝ = 0 and Ĥ = 0, so D̂ = Ĥ·Λ⁻¹ = 0 = Ĥ. Build the
        // Ĝ = 0, Ĥ ≠ 0 case directly instead through a crafted cache.
        let x = pseudo_tensor(2, 3, 1, 9);
        let b = pseudo_tensor(2, 3, 1, 10);
        let mut cache = build_cache(&x, &b).unwrap();
        cache.gram[0] = CMat::zeros(2, 2);
        let fd = recover_dhat(&cache, &[1.0, 1.0]).unwrap();
        let diff: f64 = fd
            .slice(0)
            .data()
            .iter()
            .zip(cache.cross_slice(0).data().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn recover_scalar_ridge() {
        let x = Tensor3::from_data(1, 1, 1, vec![2.0]).unwrap();
        let b = Tensor3::from_data(1, 1, 1, vec![3.0]).unwrap();
        let cache = build_cache(&x, &b).unwrap();
        let fd = recover_dhat(&cache, &[0.5]).unwrap();
        // d = xb/(b² + λ)
        assert!((fd.slice(0).get(0, 0).re - 6.0 / 9.5).abs() < 1e-14);
    }

    #[test]
    fn recover_residual_small() {
        let x = pseudo_tensor(3, 8, 4, 11);
        let b = pseudo_tensor(5, 8, 4, 12);
        let cache = build_cache(&x, &b).unwrap();
        let lambda = vec![1.0; 5];
        let fd = recover_dhat(&cache, &lambda).unwrap();
        for l in 0..unique_slices(4) {
            let mut m = cache.gram_slice(l).clone();
            m.add_diag(&lambda);
            let lhs = fd.slice(l).mul(&m);
            let mut worst = 0.0f64;
            for (a, b) in lhs.data().iter().zip(cache.cross_slice(l).data().iter()) {
                worst = worst.max((a - b).norm());
            }
            assert!(worst <= 1e-10, "slice {l}: residual {worst}");
        }
    }

    #[test]
    fn recovered_spectrum_is_symmetric() {
        let x = pseudo_tensor(3, 8, 6, 13);
        let b = pseudo_tensor(4, 8, 6, 14);
        let cache = build_cache(&x, &b).unwrap();
        let fd = recover_dhat(&cache, &vec![0.7; 4]).unwrap();
        assert!(fd.symmetry_deviation() <= 1e-10);
        assert!(idft3(&fd).is_ok());
    }

    #[test]
    fn dual_value_degenerate_zero_cache() {
        let x = pseudo_tensor(3, 4, 2, 15);
        let b = Tensor3::zeros(2, 4, 2);
        let cache = build_cache(&x, &b).unwrap();
        let v = dual_value(&cache, &[0.0, 0.0]).unwrap();
        assert!((v - cache.x_energy()).abs() < 1e-12);
    }

    #[test]
    fn dual_value_tail_is_decreasing() {
        let x = pseudo_tensor(3, 6, 3, 16);
        let b = pseudo_tensor(2, 6, 3, 17);
        let cache = build_cache(&x, &b).unwrap();
        let mut prev = f64::INFINITY;
        for c in [10.0, 100.0, 1000.0, 10000.0] {
            let v = dual_value(&cache, &[c, c]).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn dual_gradient_matches_finite_differences() {
        let x = pseudo_tensor(3, 6, 4, 18);
        let b = pseudo_tensor(3, 6, 4, 19);
        let cache = build_cache(&x, &b).unwrap();
        let lambda = [0.8, 1.3, 0.6];
        let (grad, hess) = dual_grad_hess(&cache, &lambda).unwrap();
        let h = 1e-5;
        for j in 0..3 {
            let mut up = lambda;
            up[j] += h;
            let mut dn = lambda;
            dn[j] -= h;
            let fd = (dual_value(&cache, &up).unwrap() - dual_value(&cache, &dn).unwrap())
                / (2.0 * h);
            let denom = grad[j].abs().max(1.0);
            assert!(
                (grad[j] - fd).abs() / denom <= 1e-5,
                "atom {j}: {} vs {}",
                grad[j],
                fd
            );
        }
        // Hessian symmetry and diagonal sign
        for j in 0..3 {
            assert!(hess.get(j, j) <= 1e-12);
            for i in 0..3 {
                assert!((hess.get(i, j) - hess.get(j, i)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn scalar_dual_gradient_closed_form() {
        let xv = 3.0;
        let bv = 1.5;
        let x = Tensor3::from_data(1, 1, 1, vec![xv]).unwrap();
        let b = Tensor3::from_data(1, 1, 1, vec![bv]).unwrap();
        let cache = build_cache(&x, &b).unwrap();
        for lam in [0.1, 0.5, 2.0] {
            let (grad, _) = dual_grad_hess(&cache, &[lam]).unwrap();
            let expect = xv * xv * bv * bv / ((bv * bv + lam) * (bv * bv + lam)) - 1.0;
            assert!((grad[0] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn newton_scalar_closed_form() {
        // constraint active: λ* = |xb| − b²
        let x = Tensor3::from_data(1, 1, 1, vec![3.0]).unwrap();
        let b = Tensor3::from_data(1, 1, 1, vec![1.0]).unwrap();
        let cache = build_cache(&x, &b).unwrap();
        let state = newton_solve(&cache, &[1.0]).unwrap();
        assert!(state.converged);
        assert!((state.lambda[0] - 2.0).abs() < 1e-7, "{}", state.lambda[0]);
        let c = constraint_values(&cache, &state.lambda).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn newton_inactive_constraints_stay_clamped() {
        // tiny data keeps the unconstrained fit strictly feasible
        let x = pseudo_tensor(3, 6, 3, 20).scale(1e-3);
        let b = pseudo_tensor(2, 6, 3, 21);
        let cache = build_cache(&x, &b).unwrap();
        let state = newton_solve(&cache, &[1.0, 1.0]).unwrap();
        assert!(state.converged);
        for j in 0..2 {
            assert!(state.lambda[j] <= LAMBDA_MIN * 10.0);
        }
        let c = constraint_values(&cache, &state.lambda).unwrap();
        for v in c {
            assert!(v < 3.0);
        }
    }

    #[test]
    fn dead_atoms_found_by_row() {
        let mut b = Tensor3::zeros(3, 2, 2);
        b.set(0, 1, 1, 2.0);
        b.set(2, 0, 0, -1.0);
        assert_eq!(dead_atoms(&b), vec![1]);
    }

    #[test]
    fn dict_update_skips_on_zero_coefficients() {
        let x = pseudo_tensor(3, 5, 2, 22);
        let b = Tensor3::zeros(2, 5, 2);
        let incumbent = pseudo_tensor(3, 2, 2, 23);
        let (d, state) = dict_update(&x, &b, &incumbent, &[1.0, 1.0]).unwrap();
        assert_eq!(d, incumbent);
        assert!(state.is_none());
    }

    #[test]
    fn dict_update_feasible_and_non_increasing() {
        let m = 4;
        let r = 3;
        let n = 12;
        let k = 4;
        let x = pseudo_tensor(m, n, k, 24);
        let b = pseudo_tensor(r, n, k, 25);
        let incumbent = pseudo_tensor(m, r, k, 26);
        let before = tprod(&incumbent, &b)
            .unwrap()
            .sub(&x)
            .unwrap()
            .fro_norm_sq();
        let (d, state) = dict_update(&x, &b, &incumbent, &[1.0, 1.0, 1.0]).unwrap();
        let state = state.unwrap();
        assert!(state.converged);
        let after = tprod(&d, &b).unwrap().sub(&x).unwrap().fro_norm_sq();
        assert!(after <= before + 1e-9 * before.max(1.0));
        for norm in d.atom_norms() {
            assert!(norm * norm <= 1.0 + 1e-8, "atom norm² = {}", norm * norm);
        }
    }

    #[test]
    fn noiseless_recovery_reaches_exact_fit() {
        // X generated from a feasible dictionary with well-conditioned
        // coefficients is reproduced to high accuracy
        let m = 4;
        let r = 3;
        let n = 20;
        let k = 3;
        let mut d0 = pseudo_tensor(m, r, k, 27);
        let norms = d0.atom_norms();
        for j in 0..r {
            for l in 0..k {
                for i in 0..m {
                    let v = d0.get(i, j, l) / (norms[j] * 1.5);
                    d0.set(i, j, l, v);
                }
            }
        }
        let b = pseudo_tensor(r, n, k, 28);
        let x = tprod(&d0, &b).unwrap();
        let incumbent = pseudo_tensor(m, r, k, 29);
        let (d, _) = dict_update(&x, &b, &incumbent, &[1.0; 3]).unwrap();
        let err = tprod(&d, &b).unwrap().sub(&x).unwrap().fro_norm();
        assert!(err <= 1e-8 * x.fro_norm().max(1.0), "residual {err}");
    }
}
