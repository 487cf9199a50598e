//! Discrete Fourier transform along a single axis.
//!
//! Unnormalized forward transform, `1/len` on the inverse. Power-of-two
//! lengths use an iterative radix-2 decimation-in-time kernel; every other
//! length goes through Bluestein's chirp-z reformulation on top of the
//! radix-2 kernel. Lengths here are mode-3 extents (band counts, patch
//! sides), so the plan tables stay tiny and are rebuilt per transform batch.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

const TWO_PI: f64 = core::f64::consts::TAU;

/// A reusable transform plan for one length.
pub(crate) struct Dft {
    len: usize,
    kind: Kind,
}

enum Kind {
    Identity,
    Naive(Naive),
    Radix2(Radix2),
    Bluestein(Bluestein),
}

/// Below this length a direct O(len²) evaluation beats the chirp-z detour.
const NAIVE_CUTOFF: usize = 24;

struct Naive {
    // twiddles[(t·ℓ) mod len] = exp(-2πi t ℓ / len)
    twiddles: Vec<Complex64>,
}

struct Radix2 {
    // twiddles[j] = exp(-2πi j / len) for j < len/2
    twiddles: Vec<Complex64>,
}

struct Bluestein {
    // chirp[t] = exp(-iπ t² / len)
    chirp: Vec<Complex64>,
    // forward transform of the wrapped conjugate chirp, padded to `inner_len`
    kernel_hat: Vec<Complex64>,
    inner: Box<Dft>,
    inner_len: usize,
}

impl Dft {
    pub(crate) fn new(len: usize) -> Dft {
        assert!(len > 0, "transform length must be positive");
        let kind = if len == 1 {
            Kind::Identity
        } else if len.is_power_of_two() {
            Kind::Radix2(Radix2::new(len))
        } else if len < NAIVE_CUTOFF {
            Kind::Naive(Naive::new(len))
        } else {
            Kind::Bluestein(Bluestein::new(len))
        };
        Dft { len, kind }
    }

    /// In-place forward transform: `X[ℓ] = Σ_t x[t]·exp(-2πi t ℓ / len)`.
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        match &self.kind {
            Kind::Identity => {}
            Kind::Naive(n) => n.forward(buf),
            Kind::Radix2(r) => r.forward(buf),
            Kind::Bluestein(b) => b.forward(buf),
        }
    }

    /// In-place inverse transform, including the `1/len` factor.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len);
        if let Kind::Identity = self.kind {
            return;
        }
        for z in buf.iter_mut() {
            *z = z.conj();
        }
        self.forward(buf);
        let scale = 1.0 / self.len as f64;
        for z in buf.iter_mut() {
            *z = z.conj() * scale;
        }
    }
}

impl Naive {
    fn new(len: usize) -> Naive {
        let mut twiddles = Vec::with_capacity(len);
        for j in 0..len {
            let angle = -TWO_PI * j as f64 / len as f64;
            twiddles.push(Complex64::new(angle.cos(), angle.sin()));
        }
        Naive { twiddles }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let n = buf.len();
        let mut out = Vec::with_capacity(n);
        for l in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (t, v) in buf.iter().enumerate() {
                acc += v * self.twiddles[(t * l) % n];
            }
            out.push(acc);
        }
        buf.copy_from_slice(&out);
    }
}

impl Radix2 {
    fn new(len: usize) -> Radix2 {
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        for j in 0..half {
            let angle = -TWO_PI * j as f64 / len as f64;
            twiddles.push(Complex64::new(angle.cos(), angle.sin()));
        }
        Radix2 { twiddles }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let n = buf.len();
        // bit-reversal permutation
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if j > i {
                buf.swap(i, j);
            }
        }
        let mut width = 2;
        while width <= n {
            let half = width / 2;
            let stride = n / width;
            for start in (0..n).step_by(width) {
                for j in 0..half {
                    let w = self.twiddles[j * stride];
                    let a = buf[start + j];
                    let b = buf[start + j + half] * w;
                    buf[start + j] = a + b;
                    buf[start + j + half] = a - b;
                }
            }
            width *= 2;
        }
    }
}

impl Bluestein {
    fn new(len: usize) -> Bluestein {
        let inner_len = (2 * len - 1).next_power_of_two();
        let inner = Box::new(Dft::new(inner_len));
        // t² mod 2·len keeps the chirp angle small and exact for integer t.
        let modulus = 2 * len;
        let mut chirp = Vec::with_capacity(len);
        for t in 0..len {
            let sq = (t * t) % modulus;
            let angle = -core::f64::consts::PI * sq as f64 / len as f64;
            chirp.push(Complex64::new(angle.cos(), angle.sin()));
        }
        let mut kernel = vec![Complex64::new(0.0, 0.0); inner_len];
        kernel[0] = chirp[0].conj();
        for t in 1..len {
            let v = chirp[t].conj();
            kernel[t] = v;
            kernel[inner_len - t] = v;
        }
        inner.forward(&mut kernel);
        Bluestein {
            chirp,
            kernel_hat: kernel,
            inner,
            inner_len,
        }
    }

    fn forward(&self, buf: &mut [Complex64]) {
        let len = buf.len();
        let mut work = vec![Complex64::new(0.0, 0.0); self.inner_len];
        for t in 0..len {
            work[t] = buf[t] * self.chirp[t];
        }
        self.inner.forward(&mut work);
        for (w, k) in work.iter_mut().zip(self.kernel_hat.iter()) {
            *w *= *k;
        }
        self.inner.inverse(&mut work);
        for l in 0..len {
            buf[l] = work[l] * self.chirp[l];
        }
    }
}
