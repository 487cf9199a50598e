//! Iterative shrinkage-thresholding for the tensor sparse-coding subproblem.
//!
//! With the dictionary fixed, each lateral sample of `B` minimizes
//! `½‖X − D*B‖_F² + β‖B‖₁` independently. The gradient of the smooth part is
//! `D†*D*B − D†*X`, evaluated per frequency slice with the Gram products
//! `D̂ᴴD̂` and `D̂ᴴX̂` cached once per solve. A constant step `1/L` with
//! `L = η·Σ_ℓ‖D̂^(ℓ)ᴴD̂^(ℓ)‖_F` and an entrywise soft threshold complete one
//! iteration; extrapolated mode adds the usual momentum sequence
//! `t_{p+1} = (1+√(1+4t_p²))/2`.
//!
//! Samples are processed in fixed column blocks. Block outputs are combined
//! in index order, so enabling the `parallel` feature changes wall time, not
//! bits.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Dft;
use crate::freq::{dft3, mirror_slice, slice_weight, tprod, unique_slices, IMAG_TOL};
use crate::mat::CMat;
use crate::tensor::Tensor3;

const COLUMN_BLOCK: usize = 64;

/// Step scheme for the proximal iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    /// Plain proximal gradient: monotone objective descent.
    Ista,
    /// Extrapolated iteration: faster, objective may oscillate.
    Fista,
}

/// Hyperparameters of the coefficient solver.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Sparsity weight `β > 0`; balances approximation error and sparsity.
    pub beta: f64,
    /// Hard cap on gradient steps.
    pub max_iters: usize,
    pub mode: SolverMode,
    /// Step-size safety factor `η ≥ 1`; scales the Lipschitz bound.
    pub eta: f64,
    /// Stop once the relative objective change drops below this.
    pub rel_tol: f64,
}

impl SolverConfig {
    pub fn new(beta: f64) -> Self {
        SolverConfig {
            beta,
            max_iters: 200,
            mode: SolverMode::Fista,
            eta: 1.0,
            rel_tol: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidConfig("beta must be positive and finite"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if !(self.eta >= 1.0) || !self.eta.is_finite() {
            return Err(Error::InvalidConfig("eta must be at least 1"));
        }
        if !(self.rel_tol >= 0.0) {
            return Err(Error::InvalidConfig("rel_tol must be nonnegative"));
        }
        Ok(())
    }
}

/// Per-solve record: objective after every step plus summary statistics.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Objective values; entry 0 is the starting point, one entry per step
    /// after that.
    pub objective_trace: Vec<f64>,
    pub iterations_run: usize,
    /// Fraction of exactly-zero entries in the returned coefficients.
    pub final_sparsity: f64,
    /// Step-size bound actually used (`η` included).
    pub lipschitz_used: f64,
}

/// Entrywise soft threshold `sign(v)·max(|v| − tau, 0)`.
pub fn soft_threshold(t: &Tensor3, tau: f64) -> Tensor3 {
    assert!(tau >= 0.0, "threshold must be nonnegative");
    let (m, n, k) = t.dims();
    let data = t.data().iter().map(|&v| shrink(v, tau)).collect();
    Tensor3::from_data(m, n, k, data).expect("same length")
}

#[inline]
fn shrink(v: f64, tau: f64) -> f64 {
    if v > tau {
        v - tau
    } else if v < -tau {
        v + tau
    } else {
        0.0
    }
}

/// Step-size bound `Σ_ℓ‖D̂^(ℓ)ᴴD̂^(ℓ)‖_F`, summed over all `k` slices. An
/// upper bound on the gradient's Lipschitz constant because the Frobenius
/// norm dominates the spectral norm on every slice.
pub fn lipschitz(d: &Tensor3) -> Result<f64> {
    if d.is_zero() {
        return Err(Error::ZeroDictionary);
    }
    let fd = dft3(d);
    let k = d.k();
    let u = unique_slices(k);
    let mut sum = 0.0;
    for l in 0..u {
        let gram = fd.slice(l).conj_t_mul(fd.slice(l));
        sum += slice_weight(l, k) * gram.fro_norm();
    }
    Ok(sum)
}

/// Gradient of the data term, `D†*D*B − D†*X`.
pub fn grad_f(d: &Tensor3, b: &Tensor3, x: &Tensor3) -> Result<Tensor3> {
    let ctx = SolveContext::new(d, x)?;
    if b.dims() != (d.n(), x.n(), d.k()) {
        return Err(Error::ShapeMismatch {
            op: "grad_f",
            lhs: b.dims(),
            rhs: (d.n(), x.n(), d.k()),
        });
    }
    ctx.gradient(b)
}

/// Objective `½‖X − D*B‖_F² + β‖B‖₁`.
pub fn objective(x: &Tensor3, d: &Tensor3, b: &Tensor3, beta: f64) -> Result<f64> {
    let (data, l1) = objective_parts(x, d, b)?;
    Ok(data + beta * l1)
}

/// Splits the objective into the data term `½‖X − D*B‖_F²` and the raw
/// `‖B‖₁` mass (before scaling by `β`).
pub fn objective_parts(x: &Tensor3, d: &Tensor3, b: &Tensor3) -> Result<(f64, f64)> {
    let fit = tprod(d, b)?;
    let res = x.sub(&fit)?;
    Ok((0.5 * res.fro_norm_sq(), b.l1_norm()))
}

/// Solves the coefficient subproblem starting from `B = 0`.
pub fn ista_t(x: &Tensor3, d: &Tensor3, cfg: &SolverConfig) -> Result<(Tensor3, SolveReport)> {
    let b0 = Tensor3::zeros(d.n(), x.n(), d.k());
    ista_t_from(x, d, &b0, cfg)
}

/// Solves the coefficient subproblem from a caller-supplied starting point;
/// the alternating trainer warm-starts from the previous coefficients so the
/// outer objective cannot increase.
pub fn ista_t_from(
    x: &Tensor3,
    d: &Tensor3,
    b0: &Tensor3,
    cfg: &SolverConfig,
) -> Result<(Tensor3, SolveReport)> {
    cfg.validate()?;
    let ctx = SolveContext::new(d, x)?;
    if b0.dims() != (d.n(), x.n(), d.k()) {
        return Err(Error::ShapeMismatch {
            op: "ista_t",
            lhs: b0.dims(),
            rhs: (d.n(), x.n(), d.k()),
        });
    }
    let lip = cfg.eta * ctx.lipschitz_sum;
    let tau = cfg.beta / lip;

    let mut b = b0.clone();
    let mut c = b0.clone();
    let mut t_momentum = 1.0f64;

    let mut obj = objective(x, d, &b, cfg.beta)?;
    let mut trace = vec![obj];
    let mut iterations = 0usize;

    for _ in 0..cfg.max_iters {
        let step = ctx.prox_step(&c, x, lip, tau, cfg.beta)?;
        let b_next = step.coeffs;
        let new_obj = step.objective;
        if !new_obj.is_finite() {
            return Err(Error::NonFinite { op: "ista_t" });
        }
        match cfg.mode {
            SolverMode::Ista => {
                c = b_next.clone();
            }
            SolverMode::Fista => {
                let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t_momentum * t_momentum).sqrt());
                let gamma = (t_momentum - 1.0) / t_next;
                // c = b_next + gamma (b_next - b)
                c = b_next.add_scaled(&b_next.sub(&b)?, gamma)?;
                t_momentum = t_next;
            }
        }
        b = b_next;
        iterations += 1;
        trace.push(new_obj);
        let change = (obj - new_obj).abs();
        obj = new_obj;
        // strict comparison: rel_tol = 0 disables early stopping
        if change < cfg.rel_tol * obj.abs().max(1e-300) {
            break;
        }
    }

    let zeros = b.data().iter().filter(|v| **v == 0.0).count();
    let report = SolveReport {
        objective_trace: trace,
        iterations_run: iterations,
        final_sparsity: zeros as f64 / b.data().len().max(1) as f64,
        lipschitz_used: lip,
    };
    Ok((b, report))
}

/// Frequency-domain caches shared by every iteration of one solve.
struct SolveContext {
    m: usize,
    r: usize,
    n: usize,
    k: usize,
    u: usize,
    plan: Dft,
    /// Unique slices of `D̂` (m×r).
    fd: Vec<CMat>,
    /// Unique slices of `D̂ᴴD̂` (r×r).
    gram: Vec<CMat>,
    /// Unique slices of `D̂ᴴX̂` (r×n).
    corr: Vec<CMat>,
    lipschitz_sum: f64,
}

struct ProxStep {
    coeffs: Tensor3,
    objective: f64,
}

struct BlockOut {
    j0: usize,
    nb: usize,
    /// Local slice-major block of the next coefficients (r × nb × k).
    coeffs: Vec<f64>,
    data_sq: f64,
    l1: f64,
    max_imag: f64,
    max_real: f64,
}

impl SolveContext {
    fn new(d: &Tensor3, x: &Tensor3) -> Result<SolveContext> {
        let (m, r, k) = d.dims();
        if x.m() != m || x.k() != k {
            return Err(Error::ShapeMismatch {
                op: "ista_t",
                lhs: d.dims(),
                rhs: x.dims(),
            });
        }
        if d.is_zero() {
            return Err(Error::ZeroDictionary);
        }
        let n = x.n();
        let u = unique_slices(k);
        let fd_full = dft3(d);
        let fx_full = dft3(x);
        let mut fd = Vec::with_capacity(u);
        let mut gram = Vec::with_capacity(u);
        let mut corr = Vec::with_capacity(u);
        let mut lipschitz_sum = 0.0;
        for l in 0..u {
            let dl = fd_full.slice(l).clone();
            let g = dl.conj_t_mul(&dl);
            lipschitz_sum += slice_weight(l, k) * g.fro_norm();
            corr.push(dl.conj_t_mul(fx_full.slice(l)));
            gram.push(g);
            fd.push(dl);
        }
        Ok(SolveContext {
            m,
            r,
            n,
            k,
            u,
            plan: Dft::new(k),
            fd,
            gram,
            corr,
            lipschitz_sum,
        })
    }

    /// Forward-transforms the tubes of a column block of `src` (extent
    /// `rows × nb × k`), keeping only the unique slices.
    fn forward_block(
        &self,
        src: &Tensor3,
        rows: usize,
        j0: usize,
        nb: usize,
        out: &mut [CMat],
    ) {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.k];
        for jj in 0..nb {
            for i in 0..rows {
                for (l, v) in buf.iter_mut().enumerate() {
                    *v = Complex64::new(src.get(i, j0 + jj, l), 0.0);
                }
                self.plan.forward(&mut buf);
                for l in 0..self.u {
                    out[l].set(i, jj, buf[l]);
                }
            }
        }
    }

    /// Inverse-transforms unique-slice spectra back to a real block laid out
    /// slice-major (`rows × nb × k`), tracking imaginary residue.
    fn inverse_block(
        &self,
        spec: &[CMat],
        rows: usize,
        nb: usize,
        out: &mut [f64],
        max_imag: &mut f64,
        max_real: &mut f64,
    ) {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.k];
        for jj in 0..nb {
            for i in 0..rows {
                for (l, v) in buf.iter_mut().enumerate() {
                    *v = if l < self.u {
                        spec[l].get(i, jj)
                    } else {
                        spec[mirror_slice(l, self.k)].get(i, jj).conj()
                    };
                }
                self.plan.inverse(&mut buf);
                for (l, v) in buf.iter().enumerate() {
                    *max_imag = max_imag.max(v.im.abs());
                    *max_real = max_real.max(v.re.abs());
                    out[l * rows * nb + jj * rows + i] = v.re;
                }
            }
        }
    }

    /// One proximal step evaluated at `c`, returning the shrunk coefficients
    /// and their objective. All block results are merged in column order.
    fn prox_step(
        &self,
        c: &Tensor3,
        x: &Tensor3,
        lip: f64,
        tau: f64,
        beta: f64,
    ) -> Result<ProxStep> {
        let ranges = column_ranges(self.n);
        let outs = self.map_blocks(&ranges, |j0, nb| self.block_step(c, x, j0, nb, lip, tau));

        let mut b_next = Tensor3::zeros(self.r, self.n, self.k);
        let mut data_sq = 0.0;
        let mut l1 = 0.0;
        let mut max_imag = 0.0f64;
        let mut max_real = 0.0f64;
        for o in outs {
            for l in 0..self.k {
                for jj in 0..o.nb {
                    for i in 0..self.r {
                        b_next.set(i, o.j0 + jj, l, o.coeffs[l * self.r * o.nb + jj * self.r + i]);
                    }
                }
            }
            data_sq += o.data_sq;
            l1 += o.l1;
            max_imag = max_imag.max(o.max_imag);
            max_real = max_real.max(o.max_real);
        }
        let tol = IMAG_TOL * max_real.max(1.0);
        if max_imag > tol {
            return Err(Error::ImagResidue { max_imag, tol });
        }
        Ok(ProxStep {
            coeffs: b_next,
            objective: 0.5 * data_sq + beta * l1,
        })
    }

    fn block_step(&self, c: &Tensor3, x: &Tensor3, j0: usize, nb: usize, lip: f64, tau: f64) -> BlockOut {
        let mut max_imag = 0.0f64;
        let mut max_real = 0.0f64;

        // gradient at c for this block
        let mut spec: Vec<CMat> = (0..self.u).map(|_| CMat::zeros(self.r, nb)).collect();
        self.forward_block(c, self.r, j0, nb, &mut spec);
        let grad_spec: Vec<CMat> = (0..self.u)
            .map(|l| {
                let mut g = self.gram[l].mul(&spec[l]);
                for jj in 0..nb {
                    for i in 0..self.r {
                        let v = g.get(i, jj) - self.corr[l].get(i, j0 + jj);
                        g.set(i, jj, v);
                    }
                }
                g
            })
            .collect();
        let mut grad = vec![0.0; self.r * nb * self.k];
        self.inverse_block(&grad_spec, self.r, nb, &mut grad, &mut max_imag, &mut max_real);

        // shrink the gradient step
        let step = 1.0 / lip;
        let mut coeffs = vec![0.0; self.r * nb * self.k];
        let mut l1 = 0.0;
        for l in 0..self.k {
            for jj in 0..nb {
                for i in 0..self.r {
                    let ix = l * self.r * nb + jj * self.r + i;
                    let v = c.get(i, j0 + jj, l) - step * grad[ix];
                    let s = shrink(v, tau);
                    coeffs[ix] = s;
                    l1 += s.abs();
                }
            }
        }

        // residual of the shrunk iterate for the objective
        let block = Tensor3::from_data(self.r, nb, self.k, coeffs.clone()).expect("block extents");
        let mut bspec: Vec<CMat> = (0..self.u).map(|_| CMat::zeros(self.r, nb)).collect();
        self.forward_block(&block, self.r, 0, nb, &mut bspec);
        let rec_spec: Vec<CMat> = (0..self.u).map(|l| self.fd[l].mul(&bspec[l])).collect();
        let mut rec = vec![0.0; self.m * nb * self.k];
        self.inverse_block(&rec_spec, self.m, nb, &mut rec, &mut max_imag, &mut max_real);
        let mut data_sq = 0.0;
        for l in 0..self.k {
            for jj in 0..nb {
                for i in 0..self.m {
                    let r = x.get(i, j0 + jj, l) - rec[l * self.m * nb + jj * self.m + i];
                    data_sq += r * r;
                }
            }
        }

        BlockOut {
            j0,
            nb,
            coeffs: block.into_data(),
            data_sq,
            l1,
            max_imag,
            max_real,
        }
    }

    /// Gradient over every column, assembled from block passes.
    fn gradient(&self, b: &Tensor3) -> Result<Tensor3> {
        let ranges = column_ranges(self.n);
        struct GradOut {
            j0: usize,
            nb: usize,
            grad: Vec<f64>,
            max_imag: f64,
            max_real: f64,
        }
        let outs = self.map_blocks(&ranges, |j0, nb| {
            let mut spec: Vec<CMat> = (0..self.u).map(|_| CMat::zeros(self.r, nb)).collect();
            self.forward_block(b, self.r, j0, nb, &mut spec);
            let grad_spec: Vec<CMat> = (0..self.u)
                .map(|l| {
                    let mut g = self.gram[l].mul(&spec[l]);
                    for jj in 0..nb {
                        for i in 0..self.r {
                            let v = g.get(i, jj) - self.corr[l].get(i, j0 + jj);
                            g.set(i, jj, v);
                        }
                    }
                    g
                })
                .collect();
            let mut grad = vec![0.0; self.r * nb * self.k];
            let mut max_imag = 0.0;
            let mut max_real = 0.0;
            self.inverse_block(&grad_spec, self.r, nb, &mut grad, &mut max_imag, &mut max_real);
            GradOut {
                j0,
                nb,
                grad,
                max_imag,
                max_real,
            }
        });
        let mut out = Tensor3::zeros(self.r, self.n, self.k);
        let mut max_imag = 0.0f64;
        let mut max_real = 0.0f64;
        for o in outs {
            for l in 0..self.k {
                for jj in 0..o.nb {
                    for i in 0..self.r {
                        out.set(i, o.j0 + jj, l, o.grad[l * self.r * o.nb + jj * self.r + i]);
                    }
                }
            }
            max_imag = max_imag.max(o.max_imag);
            max_real = max_real.max(o.max_real);
        }
        let tol = IMAG_TOL * max_real.max(1.0);
        if max_imag > tol {
            return Err(Error::ImagResidue { max_imag, tol });
        }
        Ok(out)
    }

    #[cfg(feature = "parallel")]
    fn map_blocks<T: Send, F: Fn(usize, usize) -> T + Sync>(
        &self,
        ranges: &[(usize, usize)],
        f: F,
    ) -> Vec<T> {
        ranges.par_iter().map(|&(j0, nb)| f(j0, nb)).collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn map_blocks<T, F: Fn(usize, usize) -> T>(&self, ranges: &[(usize, usize)], f: F) -> Vec<T> {
        ranges.iter().map(|&(j0, nb)| f(j0, nb)).collect()
    }
}

fn column_ranges(n: usize) -> Vec<(usize, usize)> {
    let mut ranges = Vec::new();
    let mut j = 0;
    while j < n {
        let nb = COLUMN_BLOCK.min(n - j);
        ranges.push((j, nb));
        j += nb;
    }
    ranges
}
