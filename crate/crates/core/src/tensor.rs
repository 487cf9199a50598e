//! Dense third-order tensors and their time-domain algebra.
//!
//! A `Tensor3` of extents `m × n × k` stores `k` frontal slices of size
//! `m × n`. Storage is frontal-slice-major with column-major slices:
//! `data[l·m·n + j·m + i]` holds entry `(i, j, l)` (all zero-based). This is
//! also the scalar order of the `T3B` file format.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mat::Mat;

/// Real third-order tensor, the container for images `X`, dictionaries `D`,
/// and coefficients `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    m: usize,
    n: usize,
    k: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(m: usize, n: usize, k: usize) -> Self {
        Tensor3 {
            m,
            n,
            k,
            data: vec![0.0; m * n * k],
        }
    }

    /// Wraps a scalar buffer laid out slice-major, column-major within slices.
    pub fn from_data(m: usize, n: usize, k: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != m * n * k {
            return Err(Error::DataLength {
                op: "Tensor3::from_data",
                expected: m * n * k,
                got: data.len(),
            });
        }
        Ok(Tensor3 { m, n, k, data })
    }

    /// Identity element of the tensor product on `m × m × k`: the first
    /// frontal slice is the identity matrix, all others are zero.
    pub fn identity(m: usize, k: usize) -> Self {
        let mut t = Tensor3::zeros(m, m, k);
        for i in 0..m {
            t.set(i, i, 0, 1.0);
        }
        t
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.k)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, l: usize) -> usize {
        l * self.m * self.n + j * self.m + i
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, l)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, l: usize, v: f64) {
        let ix = self.idx(i, j, l);
        self.data[ix] = v;
    }

    /// Frontal slice `l` as an `m × n` slice of the backing buffer.
    pub fn frontal(&self, l: usize) -> &[f64] {
        let sz = self.m * self.n;
        &self.data[l * sz..(l + 1) * sz]
    }

    pub fn frontal_mut(&mut self, l: usize) -> &mut [f64] {
        let sz = self.m * self.n;
        &mut self.data[l * sz..(l + 1) * sz]
    }

    /// Lateral slice `j` (one atom when `self` is a dictionary) as an
    /// `m × 1 × k` tensor.
    pub fn lateral(&self, j: usize) -> Tensor3 {
        let mut out = Tensor3::zeros(self.m, 1, self.k);
        for l in 0..self.k {
            for i in 0..self.m {
                out.set(i, 0, l, self.get(i, j, l));
            }
        }
        out
    }

    pub fn fro_norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.fro_norm_sq().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn scale(&self, c: f64) -> Tensor3 {
        Tensor3 {
            m: self.m,
            n: self.n,
            k: self.k,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// `self + c · other`, extents must match.
    pub fn add_scaled(&self, other: &Tensor3, c: f64) -> Result<Tensor3> {
        self.check_same_dims("Tensor3::add_scaled", other)?;
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + c * b)
            .collect();
        Ok(Tensor3 {
            m: self.m,
            n: self.n,
            k: self.k,
            data,
        })
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        self.add_scaled(other, -1.0)
    }

    fn check_same_dims(&self, op: &'static str, other: &Tensor3) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch {
                op,
                lhs: self.dims(),
                rhs: other.dims(),
            });
        }
        Ok(())
    }

    /// Stacks the frontal slices vertically into an `(m·k) × n` matrix; row
    /// block `l` is frontal slice `l`.
    pub fn unfold(&self) -> Mat {
        let mut out = Mat::zeros(self.m * self.k, self.n);
        for l in 0..self.k {
            for j in 0..self.n {
                for i in 0..self.m {
                    out.set(l * self.m + i, j, self.get(i, j, l));
                }
            }
        }
        out
    }

    /// Inverse of [`unfold`](Self::unfold); a pure copy, so the round trip is
    /// bit-identical.
    pub fn fold(mat: &Mat, k: usize) -> Result<Tensor3> {
        if k == 0 || mat.rows() % k != 0 {
            return Err(Error::DataLength {
                op: "Tensor3::fold",
                expected: k.max(1),
                got: mat.rows(),
            });
        }
        let m = mat.rows() / k;
        let n = mat.cols();
        let mut out = Tensor3::zeros(m, n, k);
        for l in 0..k {
            for j in 0..n {
                for i in 0..m {
                    out.set(i, j, l, mat.get(l * m + i, j));
                }
            }
        }
        Ok(out)
    }

    /// Tensor transpose: slice 0 is transposed in place, slice `l` swaps with
    /// slice `k - l` (so the product of transposes reverses order).
    pub fn transpose_t(&self) -> Tensor3 {
        let mut out = Tensor3::zeros(self.n, self.m, self.k);
        for l in 0..self.k {
            let src = if l == 0 { 0 } else { self.k - l };
            for j in 0..self.n {
                for i in 0..self.m {
                    out.set(j, i, l, self.get(i, j, src));
                }
            }
        }
        out
    }

    /// Circularly shifts the frontal slices forward by `s` positions along
    /// the third mode (`s` may be negative; it is taken modulo `k`).
    pub fn shift3(&self, s: i64) -> Tensor3 {
        let k = self.k as i64;
        let s = s.rem_euclid(k) as usize;
        let mut out = Tensor3::zeros(self.m, self.n, self.k);
        let sz = self.m * self.n;
        for l in 0..self.k {
            let src = (l + self.k - s) % self.k;
            out.data[l * sz..(l + 1) * sz].copy_from_slice(self.frontal(src));
        }
        out
    }

    /// Frobenius norm of each lateral slice; entry `j` bounds atom `j`'s
    /// feasibility through `atom_norms[j]² ≤ 1`.
    pub fn atom_norms(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (j, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for l in 0..self.k {
                for i in 0..self.m {
                    let v = self.get(i, j, l);
                    acc += v * v;
                }
            }
            *o = acc.sqrt();
        }
        out
    }

    /// Block-circulant expansion: an `(m·k) × (n·k)` matrix whose block
    /// `(p, q)` is frontal slice `(p − q) mod k`. Multiplying it against
    /// [`unfold`](Self::unfold) reproduces the tensor product.
    pub fn circulant_unfold(&self) -> Mat {
        let mut out = Mat::zeros(self.m * self.k, self.n * self.k);
        for q in 0..self.k {
            for p in 0..self.k {
                let l = (p + self.k - q) % self.k;
                for j in 0..self.n {
                    for i in 0..self.m {
                        out.set(p * self.m + i, q * self.n + j, self.get(i, j, l));
                    }
                }
            }
        }
        out
    }
}
