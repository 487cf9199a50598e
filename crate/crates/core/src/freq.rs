//! Frequency-domain view of third-order tensors and the tensor product.
//!
//! `dft3` applies an unnormalized DFT along the third mode; `idft3` applies
//! the inverse with the `1/k` factor. Real tensors produce conjugate-
//! symmetric spectra (`slice l` pairs with `slice k - l`), so algebra on
//! spectra only needs the first `k/2 + 1` slices; the remaining slices are
//! mirrored. The full-spectrum path is kept alongside for cross-checking.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Dft;
use crate::mat::CMat;
use crate::tensor::Tensor3;

/// Relative tolerance for accepting a claimed conjugate symmetry.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Imaginary residue tolerance (relative to data magnitude, floored at an
/// absolute scale of one) beyond which an inverse transform of supposedly
/// real data is rejected.
pub const IMAG_TOL: f64 = 1e-8;

/// Number of frequency slices that determine a conjugate-symmetric spectrum.
#[inline]
pub fn unique_slices(k: usize) -> usize {
    k / 2 + 1
}

/// Index of the slice conjugate-paired with `l`.
#[inline]
pub fn mirror_slice(l: usize, k: usize) -> usize {
    (k - l) % k
}

/// Multiplicity of slice `l` when a sum over all `k` slices is restricted to
/// the unique ones: 1 for self-paired slices (DC and, for even `k`, Nyquist),
/// 2 otherwise.
#[inline]
pub fn slice_weight(l: usize, k: usize) -> f64 {
    if l == 0 || (k % 2 == 0 && l == k / 2) {
        1.0
    } else {
        2.0
    }
}

/// Complex frontal slices of a tensor after the mode-3 DFT.
#[derive(Debug, Clone)]
pub struct FreqTensor {
    m: usize,
    n: usize,
    k: usize,
    slices: Vec<CMat>,
    symmetric: bool,
}

impl FreqTensor {
    /// Wraps `k` complex `m × n` slices. `symmetric` asserts conjugate
    /// symmetry across mirrored slices; `idft3` verifies the claim.
    pub fn from_slices(slices: Vec<CMat>, symmetric: bool) -> Result<FreqTensor> {
        let k = slices.len();
        if k == 0 {
            return Err(Error::DataLength {
                op: "FreqTensor::from_slices",
                expected: 1,
                got: 0,
            });
        }
        let m = slices[0].rows();
        let n = slices[0].cols();
        for s in &slices {
            if s.rows() != m || s.cols() != n {
                return Err(Error::ShapeMismatch {
                    op: "FreqTensor::from_slices",
                    lhs: (m, n, k),
                    rhs: (s.rows(), s.cols(), k),
                });
            }
        }
        Ok(FreqTensor {
            m,
            n,
            k,
            slices,
            symmetric,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_symmetric_flagged(&self) -> bool {
        self.symmetric
    }

    pub fn slice(&self, l: usize) -> &CMat {
        &self.slices[l]
    }

    pub fn slices(&self) -> &[CMat] {
        &self.slices
    }

    pub fn slice_mut(&mut self, l: usize) -> &mut CMat {
        &mut self.slices[l]
    }

    /// Sum of squared magnitudes over every slice; equals `k` times the
    /// squared Frobenius norm of the time-domain tensor.
    pub fn fro_norm_sq(&self) -> f64 {
        self.slices.iter().map(|s| s.fro_norm_sq()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.slices.iter().fold(0.0f64, |m, s| m.max(s.max_abs()))
    }

    /// Largest deviation from conjugate symmetry, relative to the spectrum's
    /// magnitude.
    pub fn symmetry_deviation(&self) -> f64 {
        let scale = self.max_abs().max(1.0);
        let mut worst = 0.0f64;
        for l in 1..self.k {
            let m = mirror_slice(l, self.k);
            if m <= l {
                continue;
            }
            let a = &self.slices[l];
            let b = &self.slices[m];
            for (za, zb) in a.data().iter().zip(b.data().iter()) {
                worst = worst.max((za - zb.conj()).norm());
            }
        }
        // self-paired slices must be real
        worst = worst.max(self.slices[0].data().iter().fold(0.0f64, |w, z| w.max(z.im.abs())));
        if self.k % 2 == 0 {
            worst = worst.max(
                self.slices[self.k / 2]
                    .data()
                    .iter()
                    .fold(0.0f64, |w, z| w.max(z.im.abs())),
            );
        }
        worst / scale
    }
}

/// DFT along the third mode of a real tensor.
pub fn dft3(x: &Tensor3) -> FreqTensor {
    let (m, n, k) = x.dims();
    let plan = Dft::new(k);
    let mut slices = vec![CMat::zeros(m, n); k];
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    for j in 0..n {
        for i in 0..m {
            for (l, b) in buf.iter_mut().enumerate() {
                *b = Complex64::new(x.get(i, j, l), 0.0);
            }
            plan.forward(&mut buf);
            for (l, b) in buf.iter().enumerate() {
                slices[l].set(i, j, *b);
            }
        }
    }
    FreqTensor {
        m,
        n,
        k,
        slices,
        symmetric: true,
    }
}

/// Inverse DFT along the third mode, producing a real tensor.
///
/// Rejects spectra whose claimed conjugate symmetry is violated, and rejects
/// results whose imaginary residue exceeds [`IMAG_TOL`] — either signals
/// corrupted frequency data or an algebra bug upstream, not roundoff.
pub fn idft3(f: &FreqTensor) -> Result<Tensor3> {
    if f.symmetric {
        let dev = f.symmetry_deviation();
        if dev > SYMMETRY_TOL {
            return Err(Error::SymmetryViolation { max_rel: dev });
        }
    }
    let (m, n, k) = f.dims();
    let plan = Dft::new(k);
    let mut out = Tensor3::zeros(m, n, k);
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    let mut max_imag = 0.0f64;
    let mut max_real = 0.0f64;
    for j in 0..n {
        for i in 0..m {
            for (l, b) in buf.iter_mut().enumerate() {
                *b = f.slices[l].get(i, j);
            }
            plan.inverse(&mut buf);
            for (l, b) in buf.iter().enumerate() {
                max_imag = max_imag.max(b.im.abs());
                max_real = max_real.max(b.re.abs());
                out.set(i, j, l, b.re);
            }
        }
    }
    let tol = IMAG_TOL * max_real.max(1.0);
    if max_imag > tol {
        return Err(Error::ImagResidue { max_imag, tol });
    }
    Ok(out)
}

fn check_tprod_shapes(a: &Tensor3, b: &Tensor3) -> Result<()> {
    if a.n() != b.m() || a.k() != b.k() {
        return Err(Error::ShapeMismatch {
            op: "tprod",
            lhs: a.dims(),
            rhs: b.dims(),
        });
    }
    Ok(())
}

/// Tensor product `A * B`: per-slice products in the frequency domain on the
/// unique slices, mirrored by conjugate symmetry, then inverted to a real
/// tensor.
pub fn tprod(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_tprod_shapes(a, b)?;
    let (m, _, k) = a.dims();
    let n = b.n();
    let fa = dft3(a);
    let fb = dft3(b);
    let u = unique_slices(k);
    let mut slices = vec![CMat::zeros(m, n); k];
    for l in 0..u {
        slices[l] = fa.slice(l).mul(fb.slice(l));
    }
    for l in u..k {
        slices[l] = slices[mirror_slice(l, k)].conj();
    }
    idft3(&FreqTensor {
        m,
        n,
        k,
        slices,
        symmetric: true,
    })
}

/// Tensor product evaluated on every frequency slice without mirroring; the
/// cross-check path for the conjugate-symmetry shortcut in [`tprod`].
pub fn tprod_full(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    check_tprod_shapes(a, b)?;
    let (m, _, k) = a.dims();
    let n = b.n();
    let fa = dft3(a);
    let fb = dft3(b);
    let slices: Vec<CMat> = (0..k).map(|l| fa.slice(l).mul(fb.slice(l))).collect();
    idft3(&FreqTensor {
        m,
        n,
        k,
        slices,
        symmetric: true,
    })
}
