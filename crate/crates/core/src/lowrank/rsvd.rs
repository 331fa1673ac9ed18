use crate::dense::{svd, DenseMatrix, SvdFactors};
use crate::error::Result;
use crate::rangefinder::{power_range, RangeConfig};

/// Randomized SVD with `q` steps of power iteration, truncated to rank `k`.
pub fn rsvd(a: &DenseMatrix, k: usize, p: usize, q: usize, seed: u64) -> Result<SvdFactors> {
    rsvd_with(a, &RangeConfig::new(k, seed).with_p(p).with_q(q), true)
}

/// Randomized SVD: `Q` from [`power_range`], then the SVD of `B = QᵀA`
/// lifted by `U = Q Û`. With `truncate = false` all `k + p` terms are kept,
/// in which case `‖A − U D Vᵀ‖ = ‖A − Q Qᵀ A‖` up to rounding.
pub fn rsvd_with(a: &DenseMatrix, cfg: &RangeConfig, truncate: bool) -> Result<SvdFactors> {
    let basis = power_range(a, cfg)?;
    let b = basis.b.expect("power_range materializes B");
    let small = svd(&b)?;
    let mut out = SvdFactors { u: basis.q.matmul(&small.u), s: small.s, v: small.v };
    if truncate {
        out.truncate(cfg.k);
    }
    Ok(out)
}
