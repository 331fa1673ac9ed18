//! Stage-A algorithms: orthonormal bases `Q` with `A ≈ Q Qᵀ A`.

mod adaptive;
mod fixed;

pub use adaptive::{
    blocked_adaptive, certified_probability, certified_range, greedy_lowrank, greedy_lowrank_with, GreedyStrategy,
    StopNorm, CERTIFY_ALPHA,
};
pub use fixed::{basic_range, extended_range, power_range};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Parameters shared by the fixed-rank range finders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeConfig {
    /// Target rank.
    pub k: usize,
    /// Over-sampling.
    pub p: usize,
    /// Power-iteration steps.
    pub q: usize,
    /// Orthonormalize between applications of `A` and `Aᵀ`.
    pub reorthonormalize: bool,
    pub seed: u64,
}

impl RangeConfig {
    /// `p = 10`, `q = 0`, no re-orthonormalization.
    pub fn new(k: usize, seed: u64) -> Self {
        Self { k, p: 10, q: 0, reorthonormalize: false, seed }
    }

    pub fn with_p(self, p: usize) -> Self {
        Self { p, ..self }
    }

    pub fn with_q(self, q: usize) -> Self {
        Self { q, ..self }
    }

    pub fn with_reorthonormalize(self, on: bool) -> Self {
        Self { reorthonormalize: on, ..self }
    }

    /// Sketch width `k + p`.
    pub fn ell(&self) -> usize {
        self.k + self.p
    }

    pub(crate) fn validate(&self, m: usize, n: usize) -> Result<()> {
        if self.k == 0 {
            return Err(Error::param("target rank k must be at least 1"));
        }
        if self.ell() > m.min(n) {
            return Err(Error::param(format!("k + p = {} exceeds min(m, n) = {}", self.ell(), m.min(n))));
        }
        Ok(())
    }
}

/// Orthonormal basis for an approximate range, with optional co-factor
/// `B = QᵀA` and residual bookkeeping.
#[derive(Debug, Clone)]
pub struct RangeBasis {
    pub q: DenseMatrix,
    pub b: Option<DenseMatrix>,
    /// `‖A − QB‖_F` when known.
    pub residual_frob: Option<f64>,
    /// Pivot columns chosen by [`GreedyStrategy::LargestColumn`].
    pub pivots: Option<Vec<usize>>,
}

impl RangeBasis {
    pub fn rank(&self) -> usize {
        self.q.cols()
    }

    /// Builds the basis with `B = QᵀA` and the exact residual `‖A − QB‖_F`.
    pub(crate) fn with_cofactor(a: &DenseMatrix, q: DenseMatrix) -> Self {
        let b = q.tr_matmul(a);
        let residual = projection_residual(a, &q, &b);
        Self { q, b: Some(b), residual_frob: Some(residual), pivots: None }
    }
}

/// `‖A − Q B‖_F`.
pub(crate) fn projection_residual(a: &DenseMatrix, q: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let mut r = a.clone();
    r.sub_product_assign(q, b);
    r.frob_norm()
}

/// Residual norm from the down-dating identity `‖A − QB‖_F = √(a² − ‖B‖_F²)`,
/// where `a = ‖A‖_F` and `B = QᵀA` for orthonormal `Q`.
///
/// Fails with [`Error::OrthogonalityLoss`] when `‖B‖_F` exceeds `a` by more
/// than a relative `1e-8`, which cannot happen for orthonormal `Q`.
pub fn frob_residual(a: f64, b: &DenseMatrix) -> Result<f64> {
    let bn = b.frob_norm();
    if bn > a * (1.0 + 1e-8) {
        return Err(Error::OrthogonalityLoss { a_norm: a, b_norm: bn });
    }
    Ok(((a - bn) * (a + bn)).max(0.0).sqrt())
}
