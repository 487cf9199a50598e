//! Two-dimensional sparse coding over the circular-convolution tensor
//! product.
//!
//! A third-order tensor `X ∈ R^{m×n×k}` collects `n` two-dimensional samples
//! of size `m×k` as lateral slices. The tensor product `D * B` replaces the
//! matrix product of conventional sparse coding: each tube of the result is a
//! sum of circular convolutions along the third mode, which is evaluated
//! slice-by-slice in the frequency domain. On top of that algebra this crate
//! provides
//!
//! - an iterative shrinkage-thresholding solver for the coefficient
//!   subproblem, with optional extrapolation ([`solver`]),
//! - a dictionary update that solves the norm-constrained least-squares
//!   problem through its Lagrange dual with Newton's method ([`dict`]),
//! - the alternating training loop and a patch-based multi-band image
//!   denoising pipeline ([`train`], [`patch`], [`noise`], [`metrics`]),
//! - deliberately naive reference implementations used to cross-check the
//!   fast paths ([`oracle`]).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature enables standard-library float intrinsics and `std::error::Error`
//! impls. The `parallel` feature adds rayon-based parallelism over
//! independent sub-problems; results are bitwise identical for every thread
//! count.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dict;
pub mod error;
pub(crate) mod fft;
pub mod freq;
pub mod mat;
pub mod metrics;
pub mod noise;
pub mod oracle;
pub mod patch;
pub mod solver;
pub mod tensor;
pub mod train;

pub use error::{Error, Result};
pub use freq::{dft3, idft3, tprod, tprod_full, FreqTensor};
pub use mat::{CMat, Mat};
pub use metrics::{psnr, ssim, MetricReport};
pub use patch::{BandImage, PatchGrid};
pub use solver::{
    grad_f, ista_t, ista_t_from, lipschitz, objective, soft_threshold, SolveReport, SolverConfig,
    SolverMode,
};
pub use tensor::Tensor3;
pub use train::{denoise, train, DenoiseConfig, DenoiseOutput, TraceRow, TrainConfig};
