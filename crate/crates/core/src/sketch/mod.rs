//! Seeded random test matrices: Gaussian sketches and the subsampled random
//! Fourier transform.
//!
//! # Random stream
//!
//! Every draw comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)` and switched to a stream number that identifies the
//! kind of draw ([`STREAM_GAUSSIAN`], [`STREAM_SRFT`], ...). Uniform variates
//! are `(next_u64() >> 11) · 2⁻⁵³` in `[0, 1)`. Standard normals are produced
//! in pairs by the Box–Muller transform
//! `z₀ = √(−2 ln u₁) cos 2πu₂`, `z₁ = √(−2 ln u₁) sin 2πu₂` with
//! `u₁ = 1 − uniform()` in `(0, 1]`, and fill matrices in column-major order.
//! Algorithms that need several independent draws from one user seed derive
//! per-draw seeds with [`derive_seed`].

mod fft;
mod srft;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

pub use fft::{dft_entry, fft_unitary, ifft_unitary};
pub use num_complex::Complex64;
pub use srft::{srft_apply, srft_sample};

pub const STREAM_GAUSSIAN: u64 = 0;
pub const STREAM_SRFT: u64 = 1;
pub const STREAM_UNIFORM: u64 = 2;

/// Seed for the `index`-th independent draw belonging to `seed`
/// (SplitMix64 finalizer over `seed` and `index`).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator behind every sketch in the crate.
pub struct SketchRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SketchRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { inner, spare: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.inner.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for x in out {
            *x = self.normal();
        }
    }
}

/// m×n matrix of i.i.d. standard normals drawn from stream
/// [`STREAM_GAUSSIAN`] of `seed`.
pub fn gaussian(seed: u64, m: usize, n: usize) -> DenseMatrix {
    let mut rng = SketchRng::new(seed, STREAM_GAUSSIAN);
    let mut data = vec![0.0; m * n];
    rng.fill_normal(&mut data);
    DenseMatrix::from_col_major(m, n, data).expect("normal variates are finite")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SketchKind {
    Gaussian,
    Srft,
}

/// Descriptor of a random test matrix `Ω` (n×ℓ); regenerating from the same
/// fields reproduces the same operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SketchOperator {
    pub kind: SketchKind,
    pub seed: u64,
    pub n: usize,
    pub ell: usize,
}

impl SketchOperator {
    pub fn new(kind: SketchKind, seed: u64, n: usize, ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::param("sketch width must be positive"));
        }
        if kind == SketchKind::Srft && ell > n {
            return Err(Error::param(format!("SRFT width {ell} exceeds source dimension {n}")));
        }
        Ok(Self { kind, seed, n, ell })
    }

    /// Number of real columns in `A·Ω`: ℓ for Gaussian, 2ℓ for SRFT.
    pub fn output_cols(&self) -> usize {
        match self.kind {
            SketchKind::Gaussian => self.ell,
            SketchKind::Srft => 2 * self.ell,
        }
    }

    /// Computes the sample `A·Ω`.
    pub fn apply(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        if a.cols() != self.n {
            return Err(Error::shape(format!("sketch expects {} columns, matrix has {}", self.n, a.cols())));
        }
        match self.kind {
            SketchKind::Gaussian => Ok(a.matmul(&gaussian(self.seed, self.n, self.ell))),
            SketchKind::Srft => srft_sample(a, self.ell, self.seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_reproducible_and_seed_sensitive() {
        let a = gaussian(5, 4, 3);
        assert_eq!(a, gaussian(5, 4, 3));
        assert_ne!(a, gaussian(6, 4, 3));
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SketchRng::new(1, STREAM_UNIFORM);
        assert!((0..1000).all(|_| rng.below(7) < 7));
    }

    #[test]
    fn derived_seeds_differ() {
        let s: Vec<u64> = (0..8).map(|i| derive_seed(42, i)).collect();
        for i in 0..s.len() {
            for j in 0..i {
                assert_ne!(s[i], s[j]);
            }
        }
    }

    #[test]
    fn operator_validation() {
        assert!(SketchOperator::new(SketchKind::Srft, 1, 4, 5).is_err());
        let op = SketchOperator::new(SketchKind::Srft, 1, 8, 3).unwrap();
        assert_eq!(op.output_cols(), 6);
        assert!(op.apply(&DenseMatrix::zeros(2, 7)).is_err());
    }
}
