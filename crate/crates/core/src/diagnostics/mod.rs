//! Closed-form error bounds, randomized norm estimation, and test-matrix
//! generators with planted spectra.

mod bounds;
mod matrices;

pub use bounds::{error_bound, tail_frob, BoundKind, BoundSpec};
pub use matrices::{
    haar, kahan, planted, planted_psd, test_matrix, PlantedMatrix, Spectrum, TestMatrixKind, KAHAN_THETA,
};

use crate::dense::norm2;
use crate::error::{Error, Result};
use crate::sketch::{SketchRng, STREAM_GAUSSIAN};

/// Probabilistic upper bound on `‖T‖` from `r` Gaussian probes:
/// `(1/α)·√(2/π)·maxᵢ ‖T gᵢ‖`, valid with probability at least `1 − αʳ`.
///
/// `apply` maps a probe of length `n` to `T g`. Probes are drawn one after
/// another from stream [`STREAM_GAUSSIAN`] of `seed`, so probe `i` equals
/// column `i` of `sketch::gaussian(seed, n, r)`.
pub fn estimate_spectral_norm<F>(mut apply: F, n: usize, r: usize, alpha: f64, seed: u64) -> Result<f64>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    Ok(certification_factor(alpha)? * max_probe_norm(&mut apply, n, r, seed)?)
}

/// The factor `(1/α)·√(2/π)` that turns a probe norm into a norm bound.
pub fn certification_factor(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok((2.0 / std::f64::consts::PI).sqrt() / alpha)
}

/// `maxᵢ ‖T gᵢ‖` over `r` Gaussian probes (see [`estimate_spectral_norm`]).
pub fn max_probe_norm<F>(apply: &mut F, n: usize, r: usize, seed: u64) -> Result<f64>
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    if r == 0 {
        return Err(Error::param("at least one probe is required"));
    }
    let mut rng = SketchRng::new(seed, STREAM_GAUSSIAN);
    let mut g = vec![0.0; n];
    let mut best = 0.0_f64;
    for _ in 0..r {
        rng.fill_normal(&mut g);
        best = best.max(norm2(&apply(&g)));
    }
    Ok(best)
}
