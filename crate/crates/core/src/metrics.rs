//! Image quality metrics for the [0, 255] pixel range.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::patch::BandImage;

/// Peak value of the fixed pixel range.
pub const PEAK: f64 = 255.0;

/// Sentinel returned for (numerically) identical images.
pub const PSNR_CAP: f64 = 99.0;

/// Side of the structural-similarity window.
pub const SSIM_WINDOW: usize = 11;

/// Gaussian width of the structural-similarity window.
pub const SSIM_SIGMA: f64 = 1.5;

const SSIM_C1: f64 = (0.01 * PEAK) * (0.01 * PEAK);
const SSIM_C2: f64 = (0.03 * PEAK) * (0.03 * PEAK);

/// Quality summary of a reconstructed image against its reference.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    /// Peak signal-to-noise ratio in dB, averaged over all bands' pixels.
    pub psnr: f64,
    /// Mean structural similarity, averaged over bands.
    pub ssim: f64,
    pub psnr_per_band: Vec<f64>,
    pub ssim_per_band: Vec<f64>,
}

fn check_same_dims(op: &'static str, a: &BandImage, b: &BandImage) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::ShapeMismatch {
            op,
            lhs: a.dims(),
            rhs: b.dims(),
        });
    }
    Ok(())
}

fn mse(a: &[f64], b: &[f64]) -> f64 {
    let acc: f64 = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    acc / a.len() as f64
}

fn psnr_from_mse(m: f64) -> f64 {
    if m <= 0.0 {
        return PSNR_CAP;
    }
    (10.0 * ((PEAK * PEAK) / m).log10()).min(PSNR_CAP)
}

/// Peak signal-to-noise ratio `10·log10(255²/MSE)`, capped at
/// [`PSNR_CAP`] dB for identical images.
pub fn psnr(reference: &BandImage, test: &BandImage) -> Result<f64> {
    check_same_dims("psnr", reference, test)?;
    Ok(psnr_from_mse(mse(reference.data(), test.data())))
}

/// Per-band peak signal-to-noise ratios.
pub fn psnr_per_band(reference: &BandImage, test: &BandImage) -> Result<Vec<f64>> {
    check_same_dims("psnr", reference, test)?;
    Ok((0..reference.bands())
        .map(|b| psnr_from_mse(mse(reference.band(b), test.band(b))))
        .collect())
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let mut w = [0.0; SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    let mut sum = 0.0;
    for (i, v) in w.iter_mut().enumerate() {
        let d = i as f64 - c;
        *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        sum += *v;
    }
    for v in w.iter_mut() {
        *v /= sum;
    }
    w
}

/// Mean structural similarity of one band pair over all positions where the
/// window fits entirely.
fn ssim_band(a: &[f64], b: &[f64], height: usize, width: usize) -> f64 {
    let w1 = gaussian_window();
    let half = SSIM_WINDOW / 2;
    let mut total = 0.0;
    let mut count = 0usize;
    for cy in half..height - half {
        for cx in half..width - half {
            let mut mu_a = 0.0;
            let mut mu_b = 0.0;
            let mut aa = 0.0;
            let mut bb = 0.0;
            let mut ab = 0.0;
            for dy in 0..SSIM_WINDOW {
                let y = cy + dy - half;
                for dx in 0..SSIM_WINDOW {
                    let x = cx + dx - half;
                    let wgt = w1[dy] * w1[dx];
                    let va = a[y * width + x];
                    let vb = b[y * width + x];
                    mu_a += wgt * va;
                    mu_b += wgt * vb;
                    aa += wgt * va * va;
                    bb += wgt * vb * vb;
                    ab += wgt * va * vb;
                }
            }
            let var_a = aa - mu_a * mu_a;
            let var_b = bb - mu_b * mu_b;
            let cov = ab - mu_a * mu_b;
            let num = (2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2);
            let den = (mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2);
            total += num / den;
            count += 1;
        }
    }
    total / count as f64
}

/// Per-band structural similarity (Gaussian-weighted, 11×11 window).
pub fn ssim_per_band(reference: &BandImage, test: &BandImage) -> Result<Vec<f64>> {
    check_same_dims("ssim", reference, test)?;
    let (h, w, _) = reference.dims();
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(Error::ImageTooSmall { op: "ssim" });
    }
    Ok((0..reference.bands())
        .map(|b| ssim_band(reference.band(b), test.band(b), h, w))
        .collect())
}

/// Structural similarity averaged over bands.
pub fn ssim(reference: &BandImage, test: &BandImage) -> Result<f64> {
    let per = ssim_per_band(reference, test)?;
    Ok(per.iter().sum::<f64>() / per.len() as f64)
}

/// Computes both metrics with their per-band breakdowns.
pub fn metric_report(reference: &BandImage, test: &BandImage) -> Result<MetricReport> {
    Ok(MetricReport {
        psnr: psnr(reference, test)?,
        ssim: ssim(reference, test)?,
        psnr_per_band: psnr_per_band(reference, test)?,
        ssim_per_band: ssim_per_band(reference, test)?,
    })
}
