//! Multi-band images and their patch tensorization.
//!
//! A `p × p × bands` patch becomes one lateral slice of a `p² × n × bands`
//! tensor: the spatial window is flattened column-major into the first mode
//! and the spectral bands fill the third mode, so the circular convolution
//! of the tensor product acts along the spectral axis. Reconstruction
//! averages every patch covering a pixel, accumulating in patch order so the
//! result is independent of thread count.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::tensor::Tensor3;

/// Dense stack of image bands; `data[band·H·W + y·W + x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandImage {
    height: usize,
    width: usize,
    bands: usize,
    data: Vec<f64>,
}

impl BandImage {
    pub fn zeros(height: usize, width: usize, bands: usize) -> Self {
        BandImage {
            height,
            width,
            bands,
            data: vec![0.0; height * width * bands],
        }
    }

    pub fn from_data(height: usize, width: usize, bands: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != height * width * bands {
            return Err(Error::DataLength {
                op: "BandImage::from_data",
                expected: height * width * bands,
                got: data.len(),
            });
        }
        Ok(BandImage {
            height,
            width,
            bands,
            data,
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.bands)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize, band: usize) -> f64 {
        self.data[band * self.height * self.width + y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, band: usize, v: f64) {
        self.data[band * self.height * self.width + y * self.width + x] = v;
    }

    pub fn band(&self, b: usize) -> &[f64] {
        let sz = self.height * self.width;
        &self.data[b * sz..(b + 1) * sz]
    }
}

/// Mapping between an image and its grid of tensorized patches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchGrid {
    height: usize,
    width: usize,
    bands: usize,
    patch: usize,
    stride: usize,
}

impl PatchGrid {
    pub fn new(
        height: usize,
        width: usize,
        bands: usize,
        patch: usize,
        stride: usize,
    ) -> Result<Self> {
        if patch == 0 || stride == 0 || bands == 0 {
            return Err(Error::InvalidConfig(
                "patch, stride, and band count must be positive",
            ));
        }
        if patch > height || patch > width {
            return Err(Error::ImageTooSmall {
                op: "PatchGrid::new",
            });
        }
        Ok(PatchGrid {
            height,
            width,
            bands,
            patch,
            stride,
        })
    }

    pub fn patch(&self) -> usize {
        self.patch
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn bands(&self) -> usize {
        self.bands
    }

    pub fn image_dims(&self) -> (usize, usize, usize) {
        (self.height, self.width, self.bands)
    }

    fn axis_positions(extent: usize, patch: usize, stride: usize) -> usize {
        (extent - patch) / stride + 1
    }

    pub fn rows(&self) -> usize {
        Self::axis_positions(self.height, self.patch, self.stride)
    }

    pub fn cols(&self) -> usize {
        Self::axis_positions(self.width, self.patch, self.stride)
    }

    pub fn num_patches(&self) -> usize {
        self.rows() * self.cols()
    }

    /// Top-left corners in extraction order (row-major over positions).
    pub fn positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_patches());
        for py in 0..self.rows() {
            for px in 0..self.cols() {
                out.push((py * self.stride, px * self.stride));
            }
        }
        out
    }

    /// Tensorizes the patches: output extents `p² × num_patches × bands`,
    /// spatial window flattened column-major into mode 1.
    pub fn extract(&self, image: &BandImage) -> Result<Tensor3> {
        if image.dims() != (self.height, self.width, self.bands) {
            return Err(Error::ShapeMismatch {
                op: "PatchGrid::extract",
                lhs: image.dims(),
                rhs: (self.height, self.width, self.bands),
            });
        }
        let p = self.patch;
        let n = self.num_patches();
        let mut out = Tensor3::zeros(p * p, n, self.bands);
        for (j, (y0, x0)) in self.positions().into_iter().enumerate() {
            for band in 0..self.bands {
                for dx in 0..p {
                    for dy in 0..p {
                        out.set(dx * p + dy, j, band, image.get(y0 + dy, x0 + dx, band));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rebuilds an image as the per-pixel average of all covering patches.
    ///
    /// Pixels no patch covers (possible at the far borders when
    /// `stride > 1`) are filled from the nearest covered pixel; the count of
    /// such pixels is returned alongside the image.
    pub fn reconstruct(&self, patches: &Tensor3) -> Result<(BandImage, usize)> {
        let p = self.patch;
        let n = self.num_patches();
        if patches.dims() != (p * p, n, self.bands) {
            return Err(Error::ShapeMismatch {
                op: "PatchGrid::reconstruct",
                lhs: patches.dims(),
                rhs: (p * p, n, self.bands),
            });
        }
        let mut sums = BandImage::zeros(self.height, self.width, self.bands);
        let mut counts = vec![0u32; self.height * self.width];
        for (j, (y0, x0)) in self.positions().into_iter().enumerate() {
            for band in 0..self.bands {
                for dx in 0..p {
                    for dy in 0..p {
                        let y = y0 + dy;
                        let x = x0 + dx;
                        let v = sums.get(y, x, band) + patches.get(dx * p + dy, j, band);
                        sums.set(y, x, band, v);
                        if band == 0 {
                            counts[y * self.width + x] += 1;
                        }
                    }
                }
            }
        }
        let y_cov_max = (self.rows() - 1) * self.stride + p - 1;
        let x_cov_max = (self.cols() - 1) * self.stride + p - 1;
        let mut uncovered = 0usize;
        let mut out = BandImage::zeros(self.height, self.width, self.bands);
        for y in 0..self.height {
            for x in 0..self.width {
                let c = counts[y * self.width + x];
                if c > 0 {
                    for band in 0..self.bands {
                        out.set(y, x, band, sums.get(y, x, band) / c as f64);
                    }
                }
            }
        }
        for y in 0..self.height {
            for x in 0..self.width {
                if counts[y * self.width + x] == 0 {
                    uncovered += 1;
                    let sy = y.min(y_cov_max);
                    let sx = x.min(x_cov_max);
                    for band in 0..self.bands {
                        let v = out.get(sy, sx, band);
                        out.set(y, x, band, v);
                    }
                }
            }
        }
        Ok((out, uncovered))
    }
}

/// Subtracts the scalar mean of each lateral patch, returning the means so
/// they can be restored after coding.
pub fn remove_patch_means(patches: &mut Tensor3) -> Vec<f64> {
    let (m, n, k) = patches.dims();
    let denom = (m * k) as f64;
    let mut means = vec![0.0; n];
    for (j, mean) in means.iter_mut().enumerate() {
        let mut acc = 0.0;
        for l in 0..k {
            for i in 0..m {
                acc += patches.get(i, j, l);
            }
        }
        *mean = acc / denom;
        for l in 0..k {
            for i in 0..m {
                let v = patches.get(i, j, l) - *mean;
                patches.set(i, j, l, v);
            }
        }
    }
    means
}

/// Restores per-patch means removed by [`remove_patch_means`].
pub fn add_patch_means(patches: &mut Tensor3, means: &[f64]) {
    let (m, n, k) = patches.dims();
    assert_eq!(means.len(), n, "one mean per patch");
    for (j, mean) in means.iter().enumerate() {
        for l in 0..k {
            for i in 0..m {
                let v = patches.get(i, j, l) + mean;
                patches.set(i, j, l, v);
            }
        }
    }
}
