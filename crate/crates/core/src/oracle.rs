//! Deliberately slow, obviously correct reference implementations.
//!
//! Everything here exists to cross-check the fast frequency-domain paths:
//! the naive tensor product works entry-by-entry from the circular
//! convolution definition, the dense objective works on unfolded matrices,
//! and the numerical gradient uses central differences. Clarity beats speed
//! throughout; none of this runs in a hot path.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::tensor::Tensor3;

/// Tensor product straight from the definition: every tube of the result is
/// a sum of circular convolutions of tubes, with explicit modular indexing
/// and no transforms.
pub fn tprod_naive(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    let (m, r, k) = a.dims();
    if b.m() != r || b.k() != k {
        return Err(Error::ShapeMismatch {
            op: "tprod_naive",
            lhs: a.dims(),
            rhs: b.dims(),
        });
    }
    let n = b.n();
    let mut out = Tensor3::zeros(m, n, k);
    for i in 0..m {
        for j in 0..n {
            for q in 0..r {
                for t in 0..k {
                    let mut acc = 0.0;
                    for s in 0..k {
                        acc += a.get(i, q, s) * b.get(q, j, (t + k - s) % k);
                    }
                    let v = out.get(i, j, t);
                    out.set(i, j, t, v + acc);
                }
            }
        }
    }
    Ok(out)
}

/// Sparse-coding objective on unfolded quantities:
/// `½‖x − D·b‖_F² + β‖b‖₁` with matrices holding one sample per column.
pub fn dense_sc_objective(x: &Mat, d: &Mat, b: &Mat, beta: f64) -> f64 {
    let fit = d.mul(b);
    let mut data = 0.0;
    for (xv, fv) in x.data().iter().zip(fit.data().iter()) {
        let r = xv - fv;
        data += r * r;
    }
    let l1: f64 = b.data().iter().map(|v| v.abs()).sum();
    0.5 * data + beta * l1
}

/// Entry-wise central-difference gradient of a scalar function of a tensor.
pub fn numerical_gradient<F>(f: F, at: &Tensor3, h: f64) -> Tensor3
where
    F: Fn(&Tensor3) -> f64,
{
    assert!(h > 0.0, "step must be positive");
    let mut grad = Tensor3::zeros(at.m(), at.n(), at.k());
    let mut probe = at.clone();
    for ix in 0..at.data().len() {
        let orig = probe.data()[ix];
        probe.data_mut()[ix] = orig + h;
        let up = f(&probe);
        probe.data_mut()[ix] = orig - h;
        let down = f(&probe);
        probe.data_mut()[ix] = orig;
        grad.data_mut()[ix] = (up - down) / (2.0 * h);
    }
    grad
}

/// Plain dense ISTA on the unfolded problem, one fixed step size, no
/// extrapolation. The conventional-sparse-coding baseline that the tensor
/// solver must reduce to at `k = 1`.
pub fn dense_ista(x: &Mat, d: &Mat, beta: f64, max_iters: usize, rel_tol: f64) -> (Mat, f64) {
    let gram = d.t_mul(d);
    let dtx = d.t_mul(x);
    let lip = gram.fro_norm();
    assert!(lip > 0.0, "dense_ista: zero dictionary");
    let step = 1.0 / lip;
    let tau = beta / lip;
    let mut b = Mat::zeros(d.cols(), x.cols());
    let mut obj = dense_sc_objective(x, d, &b, beta);
    for _ in 0..max_iters {
        let gb = gram.mul(&b);
        let mut next = b.clone();
        for ix in 0..next.data().len() {
            let g = gb.data()[ix] - dtx.data()[ix];
            let v = b.data()[ix] - step * g;
            next.data_mut()[ix] = shrink(v, tau);
        }
        b = next;
        let new_obj = dense_sc_objective(x, d, &b, beta);
        let change = (obj - new_obj).abs();
        obj = new_obj;
        if change < rel_tol * obj.abs().max(1e-300) {
            break;
        }
    }
    (b, obj)
}

fn shrink(v: f64, tau: f64) -> f64 {
    if v > tau {
        v - tau
    } else if v < -tau {
        v + tau
    } else {
        0.0
    }
}
