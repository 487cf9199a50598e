//! Seeded Gaussian noise for the denoising protocol.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::patch::BandImage;

/// Adds white Gaussian noise of standard deviation `sigma` to every pixel.
///
/// Deterministic for a fixed seed. Values are intentionally not clipped to
/// the pixel range: clipping would bias the noise statistics that the
/// metrics are checked against. Clamp at export time if a viewable image is
/// needed.
pub fn add_gaussian_noise(image: &BandImage, sigma: f64, seed: u64) -> BandImage {
    assert!(sigma >= 0.0, "noise level must be nonnegative");
    if sigma == 0.0 {
        return image.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = image.clone();
    for v in out.data_mut() {
        let z: f64 = StandardNormal.sample(&mut rng);
        *v += sigma * z;
    }
    out
}
