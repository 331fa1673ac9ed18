//! Shared inputs for the criterion benchmarks.

use randfact_core::diagnostics::{planted, planted_psd, Spectrum};
use randfact_core::sketch::gaussian;
use randfact_core::DenseMatrix;

/// Seed used by every fixture so that runs compare like with like.
pub const FIXTURE_SEED: u64 = 0x5eed;

/// m×n matrix with geometrically decaying spectrum `σ_j = 0.9^{j−1}`.
pub fn decaying(m: usize, n: usize) -> DenseMatrix {
    planted(&Spectrum::FastDecay { beta: 0.9 }, m, n, FIXTURE_SEED).expect("valid fixture").a
}

/// n×n symmetric positive semidefinite matrix with a flat tail after `k`.
pub fn psd_flat_tail(n: usize, k: usize) -> DenseMatrix {
    planted_psd(&Spectrum::FlatTail { k, tail: 0.01 }, n, FIXTURE_SEED).expect("valid fixture").a
}

/// Unstructured m×n Gaussian matrix.
pub fn unstructured(m: usize, n: usize) -> DenseMatrix {
    gaussian(FIXTURE_SEED, m, n)
}
