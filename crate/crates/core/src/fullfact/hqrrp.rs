use crate::dense::householder::{explicit_q, factor_panel, BlockReflector};
use crate::dense::{cpqr, CpqrStop, DenseMatrix, PivotedQr};
use crate::error::{Error, Result};
use crate::sketch::{derive_seed, gaussian};

/// How each block of pivots is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Pivoted QR of a fresh `(b + p)×m'` Gaussian sketch of the trailing
    /// matrix.
    Sketch,
    /// Pivoted QR of the trailing matrix itself (deterministic reference).
    ColumnNorms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HqrrpOptions {
    pub block: usize,
    pub oversampling: usize,
    pub rule: PivotRule,
}

impl Default for HqrrpOptions {
    fn default() -> Self {
        Self { block: 32, oversampling: 10, rule: PivotRule::Sketch }
    }
}

/// Householder QR with randomized block pivoting: `A(:, perm) = Q R`.
pub fn hqrrp(a: &DenseMatrix, b: usize, p: usize, seed: u64) -> Result<PivotedQr> {
    hqrrp_with(a, &HqrrpOptions { block: b, oversampling: p, rule: PivotRule::Sketch }, seed)
}

/// [`hqrrp`] with explicit options. Block `i` draws its sketch from
/// `derive_seed(seed, i)`.
pub fn hqrrp_with(a: &DenseMatrix, opts: &HqrrpOptions, seed: u64) -> Result<PivotedQr> {
    if opts.block == 0 {
        return Err(Error::param("block size must be at least 1"));
    }
    let (m, n) = a.shape();
    let r = m.min(n);
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut blocks = Vec::new();
    let mut j0 = 0;
    let mut step = 0u64;
    while j0 < r {
        let nb = opts.block.min(r - j0);
        let trailing = w.submatrix(j0..m, j0..n);
        let chosen = match opts.rule {
            PivotRule::Sketch => {
                let g = gaussian(derive_seed(seed, step), nb + opts.oversampling, m - j0);
                cpqr(&g.matmul(&trailing), CpqrStop::Rank(nb)).perm
            }
            PivotRule::ColumnNorms => cpqr(&trailing, CpqrStop::Rank(nb)).perm,
        };
        step += 1;
        // Bring the chosen columns to the front, keeping the rest in order.
        let mut order: Vec<usize> = chosen[..nb].to_vec();
        let mut taken = vec![false; n - j0];
        order.iter().for_each(|&c| taken[c] = true);
        order.extend((0..n - j0).filter(|&c| !taken[c]));
        let cols: Vec<usize> = order.iter().map(|&c| j0 + c).collect();
        let moved = w.select_columns(&cols);
        w.set_submatrix(0, j0, &moved);
        let old: Vec<usize> = perm[j0..].to_vec();
        for (k, &c) in order.iter().enumerate() {
            perm[j0 + k] = old[c];
        }

        let taus = factor_panel(&mut w, j0, j0, nb);
        let block = BlockReflector::from_factored(&w, j0, j0, &taus);
        block.apply_qt(&mut w, j0 + nb..n);
        blocks.push(block);
        j0 += nb;
    }
    let q = explicit_q(&blocks, m, r);
    let rr = DenseMatrix::from_fn(r, n, |i, j| if i <= j { w[(i, j)] } else { 0.0 });
    Ok(PivotedQr { q, r: rr, perm, stopped_rank: r, trailing_frob: 0.0 })
}
