use super::{RangeBasis, RangeConfig};
use crate::dense::{orth, DenseMatrix};
use crate::error::{Error, Result};
use crate::sketch::gaussian;

/// `Q = orth(A G)` with `G = gaussian(seed, n, k + p)`; requires `q = 0`.
pub fn basic_range(a: &DenseMatrix, cfg: &RangeConfig) -> Result<RangeBasis> {
    if cfg.q != 0 {
        return Err(Error::param("basic_range takes no power iterations; use power_range"));
    }
    power_range(a, cfg)
}

/// Samples `(AAᵀ)^q A G` and orthonormalizes. With `reorthonormalize` the
/// basis is re-orthonormalized after every application of `A` or `Aᵀ`;
/// otherwise only the final sample is orthonormalized. For `q = 0` this is
/// exactly [`basic_range`].
pub fn power_range(a: &DenseMatrix, cfg: &RangeConfig) -> Result<RangeBasis> {
    let (m, n) = a.shape();
    cfg.validate(m, n)?;
    let g = gaussian(cfg.seed, n, cfg.ell());
    let q = if cfg.reorthonormalize {
        let mut q = orth(&a.matmul(&g));
        for _ in 0..cfg.q {
            let w = orth(&a.tr_matmul(&q));
            q = orth(&a.matmul(&w));
        }
        q
    } else {
        let mut y = a.matmul(&g);
        for _ in 0..cfg.q {
            let z = a.tr_matmul(&y);
            y = a.matmul(&z);
        }
        orth(&y)
    };
    Ok(RangeBasis::with_cofactor(a, q))
}

/// Extended (block Krylov) sample `[AG, A²G, …, A^q G]` for square `A`.
/// With `reorthonormalize` each block is orthonormalized before the next
/// multiplication, which spans the same space.
pub fn extended_range(a: &DenseMatrix, cfg: &RangeConfig) -> Result<RangeBasis> {
    let (m, n) = a.shape();
    if m != n {
        return Err(Error::param(format!("extended sampling needs a square matrix, got {m}x{n}")));
    }
    cfg.validate(m, n)?;
    if cfg.q == 0 {
        return Err(Error::param("extended sampling needs q >= 1"));
    }
    if cfg.q * cfg.ell() > n {
        return Err(Error::param(format!("q(k + p) = {} exceeds the dimension {n}", cfg.q * cfg.ell())));
    }
    let g = gaussian(cfg.seed, n, cfg.ell());
    let mut block = a.matmul(&g);
    if cfg.reorthonormalize {
        block = orth(&block);
    }
    let mut y = block.clone();
    for _ in 1..cfg.q {
        block = a.matmul(&block);
        if cfg.reorthonormalize {
            block = orth(&block);
        }
        y = y.hcat(&block);
    }
    Ok(RangeBasis::with_cofactor(a, orth(&y)))
}
