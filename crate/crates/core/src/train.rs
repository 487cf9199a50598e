//! Alternating minimization and the patch-based denoising pipeline.
//!
//! Training alternates the coefficient solve (warm-started from the previous
//! coefficients, so the step cannot increase the objective) with the
//! dual-based dictionary update (a global minimizer over the feasible set,
//! so neither can that). The full objective is therefore non-increasing
//! across outer iterations; the trace records it together with its split and
//! the coefficient sparsity.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dict::dict_update;
use crate::error::{Error, Result};
use crate::freq::tprod;
use crate::metrics::{metric_report, MetricReport};
use crate::patch::{add_patch_means, remove_patch_means, BandImage, PatchGrid};
use crate::solver::{ista_t_from, objective_parts, SolverConfig};
use crate::tensor::Tensor3;

/// Configuration of the alternating trainer.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    /// Number of dictionary atoms `r`.
    pub atoms: usize,
    /// Maximum outer iterations.
    pub outer_iters: usize,
    /// Coefficient solver settings; its `beta` is the sparsity weight of the
    /// full objective.
    pub inner: SolverConfig,
    /// Seed for the random dictionary initialization.
    pub seed: u64,
    /// Early-stop threshold on the relative outer objective change;
    /// zero runs all `outer_iters`.
    pub outer_rel_tol: f64,
}

impl TrainConfig {
    pub fn new(atoms: usize, beta: f64) -> Self {
        TrainConfig {
            atoms,
            outer_iters: 30,
            inner: SolverConfig::new(beta),
            seed: 0,
            outer_rel_tol: 0.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.inner.beta
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms == 0 {
            return Err(Error::InvalidConfig("atom count must be at least 1"));
        }
        if self.outer_iters == 0 {
            return Err(Error::InvalidConfig("outer_iters must be at least 1"));
        }
        if !(self.outer_rel_tol >= 0.0) {
            return Err(Error::InvalidConfig("outer_rel_tol must be nonnegative"));
        }
        self.inner.validate()
    }
}

/// One outer iteration of the training trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    /// Outer iteration, starting at 1.
    pub iter: usize,
    /// `data_term + l1_term`.
    pub objective: f64,
    /// `½‖X − D*B‖_F²`.
    pub data_term: f64,
    /// `β·‖B‖₁`.
    pub l1_term: f64,
    /// Fraction of exactly-zero coefficient entries.
    pub sparsity: f64,
}

/// Draws a dictionary with independent standard-normal entries and unit
/// Frobenius norm per atom (feasible by construction). Deterministic for a
/// fixed seed.
pub fn random_dictionary(m: usize, atoms: usize, k: usize, seed: u64) -> Tensor3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Tensor3::zeros(m, atoms, k);
    for j in 0..atoms {
        let mut norm_sq = 0.0;
        for l in 0..k {
            for i in 0..m {
                let z: f64 = StandardNormal.sample(&mut rng);
                d.set(i, j, l, z);
                norm_sq += z * z;
            }
        }
        if norm_sq == 0.0 {
            d.set(0, j, 0, 1.0);
            continue;
        }
        let inv = 1.0 / norm_sq.sqrt();
        for l in 0..k {
            for i in 0..m {
                let v = d.get(i, j, l) * inv;
                d.set(i, j, l, v);
            }
        }
    }
    d
}

/// Learns a dictionary and coefficients for `x` by alternating minimization.
///
/// Returns the dictionary, the coefficients, and the per-outer-iteration
/// trace of the full objective.
pub fn train(x: &Tensor3, cfg: &TrainConfig) -> Result<(Tensor3, Tensor3, Vec<TraceRow>)> {
    cfg.validate()?;
    let (m, n, k) = x.dims();
    let r = cfg.atoms;
    let mut d = random_dictionary(m, r, k, cfg.seed);
    let mut b = Tensor3::zeros(r, n, k);
    let mut lambda = vec![1.0; r];
    let mut trace = Vec::with_capacity(cfg.outer_iters);
    let mut prev_obj = f64::INFINITY;

    for iter in 1..=cfg.outer_iters {
        let (b_next, _report) = ista_t_from(x, &d, &b, &cfg.inner)?;
        b = b_next;

        let (d_next, dual) = dict_update(x, &b, &d, &lambda)?;
        d = d_next;
        if let Some(state) = dual {
            lambda = state.lambda;
        }

        let (data_term, l1_raw) = objective_parts(x, &d, &b)?;
        let l1_term = cfg.beta() * l1_raw;
        let objective = data_term + l1_term;
        if !objective.is_finite() {
            return Err(Error::NonFinite { op: "train" });
        }
        let zeros = b.data().iter().filter(|v| **v == 0.0).count();
        trace.push(TraceRow {
            iter,
            objective,
            data_term,
            l1_term,
            sparsity: zeros as f64 / b.data().len().max(1) as f64,
        });

        if cfg.outer_rel_tol > 0.0 && prev_obj.is_finite() {
            let change = (prev_obj - objective).abs();
            if change <= cfg.outer_rel_tol * prev_obj.abs().max(1e-300) {
                break;
            }
        }
        prev_obj = objective;
    }
    Ok((d, b, trace))
}

/// Configuration of the end-to-end denoiser.
#[derive(Debug, Clone)]
pub struct DenoiseConfig {
    pub train: TrainConfig,
    /// Patch side `p`; patches are `p × p × bands`.
    pub patch: usize,
    /// Grid stride; 1 gives maximal overlap.
    pub stride: usize,
    /// Remove each patch's scalar mean before coding and restore it on
    /// reconstruction.
    pub remove_means: bool,
}

impl DenoiseConfig {
    pub fn new(train: TrainConfig) -> Self {
        DenoiseConfig {
            train,
            patch: 5,
            stride: 1,
            remove_means: true,
        }
    }
}

/// Everything a denoising run produces.
#[derive(Debug, Clone)]
pub struct DenoiseOutput {
    pub denoised: BandImage,
    /// Metrics against the clean reference, when one was supplied.
    pub metrics: Option<MetricReport>,
    pub dictionary: Tensor3,
    pub coefficients: Tensor3,
    pub trace: Vec<TraceRow>,
    /// Pixels not covered by any patch (filled from neighbors).
    pub uncovered: usize,
}

/// Trains a dictionary on the noisy image's own patches, encodes them, and
/// rebuilds the image by overlap-averaging the coded patches.
pub fn denoise(
    noisy: &BandImage,
    clean: Option<&BandImage>,
    cfg: &DenoiseConfig,
) -> Result<DenoiseOutput> {
    let (h, w, bands) = noisy.dims();
    let grid = PatchGrid::new(h, w, bands, cfg.patch, cfg.stride)?;
    let mut patches = grid.extract(noisy)?;
    let means = if cfg.remove_means {
        Some(remove_patch_means(&mut patches))
    } else {
        None
    };
    let (dictionary, coefficients, trace) = train(&patches, &cfg.train)?;
    let mut coded = tprod(&dictionary, &coefficients)?;
    if let Some(means) = &means {
        add_patch_means(&mut coded, means);
    }
    let (denoised, uncovered) = grid.reconstruct(&coded)?;
    let metrics = match clean {
        Some(reference) => Some(metric_report(reference, &denoised)?),
        None => None,
    };
    Ok(DenoiseOutput {
        denoised,
        metrics,
        dictionary,
        coefficients,
        trace,
        uncovered,
    })
}
