//! Minimal dense matrices used by the frequency-domain algebra.
//!
//! Column-major real and complex matrices with exactly the operations the
//! solvers need. Reductions run in a fixed index order so results do not
//! depend on the degree of parallelism anywhere above.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense real matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                op: "Mat::from_data",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "Mat::mul: inner extents differ");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for p in 0..self.cols {
                let b = rhs.get(p, j);
                if b == 0.0 {
                    continue;
                }
                let a_col = &self.data[p * self.rows..(p + 1) * self.rows];
                let o_col = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for i in 0..self.rows {
                    o_col[i] += a_col[i] * b;
                }
            }
        }
        out
    }

    /// `selfᵀ * rhs`.
    pub fn t_mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.rows, rhs.rows, "Mat::t_mul: row extents differ");
        let mut out = Mat::zeros(self.cols, rhs.cols);
        for j in 0..rhs.cols {
            for i in 0..self.cols {
                let a_col = &self.data[i * self.rows..(i + 1) * self.rows];
                let b_col = &rhs.data[j * rhs.rows..(j + 1) * rhs.rows];
                let mut acc = 0.0;
                for p in 0..self.rows {
                    acc += a_col[p] * b_col[p];
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Dense complex matrix, column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn conj_t(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "CMat::mul: inner extents differ");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for p in 0..self.cols {
                let b = rhs.get(p, j);
                let a_col = &self.data[p * self.rows..(p + 1) * self.rows];
                let o_col = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for i in 0..self.rows {
                    o_col[i] += a_col[i] * b;
                }
            }
        }
        out
    }

    /// `selfᴴ * rhs` without forming the transpose.
    pub fn conj_t_mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.rows, rhs.rows, "CMat::conj_t_mul: row extents differ");
        let mut out = CMat::zeros(self.cols, rhs.cols);
        for j in 0..rhs.cols {
            for i in 0..self.cols {
                let a_col = &self.data[i * self.rows..(i + 1) * self.rows];
                let b_col = &rhs.data[j * rhs.rows..(j + 1) * rhs.rows];
                let mut acc = Complex64::new(0.0, 0.0);
                for p in 0..self.rows {
                    acc += a_col[p].conj() * b_col[p];
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// `self * rhsᴴ` without forming the transpose.
    pub fn mul_conj_t(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.cols, "CMat::mul_conj_t: column extents differ");
        let mut out = CMat::zeros(self.rows, rhs.rows);
        for p in 0..self.cols {
            let a_col = &self.data[p * self.rows..(p + 1) * self.rows];
            for j in 0..rhs.rows {
                let b = rhs.get(j, p).conj();
                let o_col = &mut out.data[j * self.rows..(j + 1) * self.rows];
                for i in 0..self.rows {
                    o_col[i] += a_col[i] * b;
                }
            }
        }
        out
    }

    /// Forces exact Hermitian structure by averaging with the conjugate
    /// transpose; removes roundoff asymmetry from Gram products.
    pub fn hermitianize(&mut self) {
        assert_eq!(self.rows, self.cols);
        for j in 0..self.cols {
            for i in 0..j {
                let a = self.get(i, j);
                let b = self.get(j, i);
                let avg = 0.5 * (a + b.conj());
                self.set(i, j, avg);
                self.set(j, i, avg.conj());
            }
        }
        for i in 0..self.rows {
            let d = self.get(i, i);
            self.set(i, i, Complex64::new(d.re, 0.0));
        }
    }

    /// Adds `diag[j]` to entry `(j, j)`.
    pub fn add_diag(&mut self, diag: &[f64]) {
        assert_eq!(self.rows, self.cols);
        assert_eq!(diag.len(), self.rows);
        for (j, d) in diag.iter().enumerate() {
            let v = self.get(j, j);
            self.set(j, j, v + Complex64::new(*d, 0.0));
        }
    }

    pub fn add_scalar_diag(&mut self, d: f64) {
        assert_eq!(self.rows, self.cols);
        for j in 0..self.rows {
            let v = self.get(j, j);
            self.set(j, j, v + Complex64::new(d, 0.0));
        }
    }

    pub fn fro_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.fro_norm_sq().sqrt()
    }

    pub fn col_norm_sq(&self, j: usize) -> f64 {
        self.data[j * self.rows..(j + 1) * self.rows]
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .fold(0.0f64, |m, z| m.max(z.re.abs()).max(z.im.abs()))
    }

    pub fn trace_real_diag(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|j| self.get(j, j).re).sum()
    }
}

/// Cholesky factor `L` of a Hermitian positive-definite matrix (`A = L Lᴴ`),
/// lower triangle stored.
pub struct Cholesky {
    l: CMat,
}

impl Cholesky {
    /// Factors `a`; fails when a pivot is not strictly positive.
    pub fn new(a: &CMat) -> Option<Cholesky> {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut l = CMat::zeros(n, n);
        for j in 0..n {
            let mut d = a.get(j, j).re;
            for p in 0..j {
                d -= l.get(j, p).norm_sqr();
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let djj = d.sqrt();
            l.set(j, j, Complex64::new(djj, 0.0));
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for p in 0..j {
                    s -= l.get(i, p) * l.get(j, p).conj();
                }
                l.set(i, j, s / djj);
            }
        }
        Some(Cholesky { l })
    }

    /// Solves `A x = b` in place for every column of `b`.
    pub fn solve_in_place(&self, b: &mut CMat) {
        let n = self.l.rows;
        assert_eq!(b.rows, n);
        for col in 0..b.cols {
            // forward: L y = b
            for i in 0..n {
                let mut s = b.get(i, col);
                for p in 0..i {
                    s -= self.l.get(i, p) * b.get(p, col);
                }
                b.set(i, col, s / self.l.get(i, i));
            }
            // backward: Lᴴ x = y
            for i in (0..n).rev() {
                let mut s = b.get(i, col);
                for p in (i + 1)..n {
                    s -= self.l.get(p, i).conj() * b.get(p, col);
                }
                b.set(i, col, s / self.l.get(i, i));
            }
        }
    }

    /// Explicit inverse of the factored matrix.
    pub fn inverse(&self) -> CMat {
        let n = self.l.rows;
        let mut inv = CMat::zeros(n, n);
        for j in 0..n {
            inv.set(j, j, Complex64::new(1.0, 0.0));
        }
        self.solve_in_place(&mut inv);
        inv
    }
}

/// Solves the real symmetric positive-definite system `A x = b`.
/// Used for the Newton step on the dual of the dictionary update.
pub fn solve_spd(a: &Mat, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows;
    assert_eq!(a.rows, a.cols);
    assert_eq!(b.len(), n);
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a.get(j, j);
        for p in 0..j {
            let v = l.get(j, p);
            d -= v * v;
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let djj = d.sqrt();
        l.set(j, j, djj);
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for p in 0..j {
                s -= l.get(i, p) * l.get(j, p);
            }
            l.set(i, j, s / djj);
        }
    }
    let mut x: Vec<f64> = b.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for p in 0..i {
            s -= l.get(i, p) * x[p];
        }
        x[i] = s / l.get(i, i);
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for p in (i + 1)..n {
            s -= l.get(p, i) * x[p];
        }
        x[i] = s / l.get(i, i);
    }
    Some(x)
}
