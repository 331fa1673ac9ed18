use super::LowRankEvd;
use crate::dense::{cholesky, orth, solve_upper_right, svd, DenseMatrix};
use crate::error::{Error, Result, Warning};
use crate::rangefinder::RangeConfig;
use crate::sketch::gaussian;

/// Relative asymmetry tolerated in the input before it is rejected.
const SYMMETRY_TOL: f64 = 1e-10;

/// Nyström eigenvalue decomposition of a positive semidefinite matrix,
/// truncated to rank `k`.
pub fn nystrom_evd(a: &DenseMatrix, k: usize, p: usize, seed: u64) -> Result<LowRankEvd> {
    nystrom_evd_with(a, &RangeConfig::new(k, seed).with_p(p), true)
}

/// Nyström approximation `A ≈ F Fᵀ` with `F = (AQ)(QᵀAQ)^{-1/2}`, returned as
/// an EVD with `λ = σ(F)²`.
///
/// If the Cholesky factorization of `QᵀAQ` fails, it is retried once with
/// the shift `1e-12·trace(A)` added to the diagonal (reported as
/// [`Warning::ShiftApplied`]); a second failure is a
/// [`Error::PsdViolation`].
pub fn nystrom_evd_with(a: &DenseMatrix, cfg: &RangeConfig, truncate: bool) -> Result<LowRankEvd> {
    let (m, n) = a.shape();
    if m != n {
        return Err(Error::shape(format!("Nyström needs a square matrix, got {m}x{n}")));
    }
    cfg.validate(m, n)?;
    let asym = a.sub(&a.transpose()).max_abs();
    if asym > SYMMETRY_TOL * a.max_abs() {
        return Err(Error::param(format!("matrix is not symmetric (max asymmetry {asym:e})")));
    }
    let a = a.add(&a.transpose()).scale(0.5);
    let q = orth(&a.matmul(&gaussian(cfg.seed, n, cfg.ell())));
    if q.cols() == 0 {
        return Ok(LowRankEvd { u: DenseMatrix::zeros(n, 0), lambda: Vec::new(), warnings: Vec::new() });
    }
    let b1 = a.matmul(&q);
    let b2 = q.tr_matmul(&b1);
    let b2 = b2.add(&b2.transpose()).scale(0.5);
    let mut warnings = Vec::new();
    let c = match cholesky(&b2) {
        Ok(c) => c,
        Err(Error::NotPositiveDefinite { .. }) => {
            let shift = 1e-12 * a.trace();
            if !(shift > 0.0) {
                return Err(Error::PsdViolation(format!("trace {:e} is not positive", a.trace())));
            }
            let mut shifted = b2.clone();
            for i in 0..shifted.rows() {
                shifted[(i, i)] += shift;
            }
            let c = cholesky(&shifted).map_err(|e| Error::PsdViolation(format!("after shift {shift:e}: {e}")))?;
            warnings.push(Warning::ShiftApplied { shift });
            c
        }
        Err(e) => return Err(e),
    };
    let f = solve_upper_right(&b1, &c)?;
    let fs = svd(&f)?;
    let lambda = fs.s.iter().map(|s| s * s).collect();
    let mut out = LowRankEvd { u: fs.u, lambda, warnings };
    if truncate {
        out.truncate(cfg.k);
    }
    Ok(out)
}
