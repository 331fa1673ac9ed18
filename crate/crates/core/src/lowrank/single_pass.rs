use super::{LowRankEvd, MatrixStream};
use crate::dense::{svd, sym_eig, DenseMatrix, SvdFactors, PINV_RTOL};
use crate::error::{Error, Result, Warning};
use crate::sketch::{derive_seed, gaussian};

/// Condition number of the projected test matrix above which a warning is
/// attached to single-pass results.
const COND_WARN: f64 = 1e12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SinglePassOptions {
    /// Keep all `k + p` sample directions in the small system instead of the
    /// `k` dominant ones, truncating only after the final decomposition.
    pub full_width: bool,
}

/// Single-pass SVD together with its diagnostics.
#[derive(Debug, Clone)]
pub struct SinglePassSvd {
    pub factors: SvdFactors,
    pub warnings: Vec<Warning>,
}

fn check_rank(k: usize, p: usize, m: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::param("target rank k must be at least 1"));
    }
    if k + p > m.min(n) {
        return Err(Error::param(format!("k + p = {} exceeds min(m, n) = {}", k + p, m.min(n))));
    }
    Ok(())
}

/// Leading `width` left singular vectors of `y`.
fn dominant_basis(y: &DenseMatrix, width: usize) -> Result<DenseMatrix> {
    let mut f = svd(y)?;
    f.truncate(width);
    Ok(f.u)
}

fn condition_warning(what: &'static str, s: &[f64], warnings: &mut Vec<Warning>) {
    let cond = match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => return,
    };
    if cond > COND_WARN {
        warnings.push(Warning::IllConditioned { what, condition: cond });
    }
}

/// Minimum-norm least-squares solution of the stacked system
/// `C M = N`, `Mᵀ C = Nᵀ`. Diagonalizing with the SVD `M = U Σ Vᵀ` decouples
/// the vectorized system entrywise: `C = U C̃ Uᵀ` with
/// `C̃ᵢⱼ = (σⱼ Pᵢⱼ + σᵢ Pⱼᵢ)/(σᵢ² + σⱼ²)`, `P = Uᵀ N V`. The result is
/// symmetric.
fn hermitian_least_squares(m: &DenseMatrix, n: &DenseMatrix, warnings: &mut Vec<Warning>) -> Result<DenseMatrix> {
    let f = svd(m)?;
    condition_warning("Q^T G", &f.s, warnings);
    let w = f.s.len();
    let p = f.u.tr_matmul(n).matmul(&f.v);
    let cut = PINV_RTOL * f.s.first().copied().unwrap_or(0.0);
    let mut ct = DenseMatrix::zeros(w, w);
    for j in 0..w {
        for i in 0..w {
            let (si, sj) = (f.s[i], f.s[j]);
            let d = si * si + sj * sj;
            if d.sqrt() > cut * std::f64::consts::SQRT_2 && d > 0.0 {
                ct[(i, j)] = (sj * p[(i, j)] + si * p[(j, i)]) / d;
            }
        }
    }
    let c = f.u.matmul(&ct).matmul_tr(&f.u);
    Ok(c.add(&c.transpose()).scale(0.5))
}

/// Minimum-norm least-squares solution of the joint system
/// `P C = R₁`, `C M = R₂`, decoupled through the SVDs `P = U_p Σ_p W_pᵀ`,
/// `M = U_m Σ_m V_mᵀ`: `C = W_p C̃ U_mᵀ`.
fn joint_least_squares(
    p: &DenseMatrix,
    r1: &DenseMatrix,
    m: &DenseMatrix,
    r2: &DenseMatrix,
    warnings: &mut Vec<Warning>,
) -> Result<DenseMatrix> {
    let fp = svd(p)?;
    let fm = svd(m)?;
    condition_warning("G_r^T Q_c", &fp.s, warnings);
    condition_warning("Q_r^T G_c", &fm.s, warnings);
    let e1 = fp.u.tr_matmul(r1).matmul(&fm.u);
    let e2 = fp.v.tr_matmul(r2).matmul(&fm.v);
    let smax = fp.s.first().copied().unwrap_or(0.0).hypot(fm.s.first().copied().unwrap_or(0.0));
    let cut = PINV_RTOL * smax;
    let mut ct = DenseMatrix::zeros(fp.s.len(), fm.s.len());
    for j in 0..fm.s.len() {
        for i in 0..fp.s.len() {
            let (a, b) = (fp.s[i], fm.s[j]);
            let d = a * a + b * b;
            if d.sqrt() > cut && d > 0.0 {
                ct[(i, j)] = (a * e1[(i, j)] + b * e2[(i, j)]) / d;
            }
        }
    }
    Ok(fp.v.matmul(&ct).matmul_tr(&fm.u))
}

/// Single-pass EVD of a symmetric matrix with the default options.
pub fn single_pass_evd(stream: &mut MatrixStream<'_>, k: usize, p: usize, seed: u64) -> Result<LowRankEvd> {
    single_pass_evd_with(stream, k, p, seed, SinglePassOptions::default())
}

/// Single-pass EVD of a symmetric matrix: one traversal forms `Y = A G`,
/// `Q` holds the dominant left singular vectors of `Y`, and the symmetric
/// `C` solves `C (QᵀG) = QᵀY` in the least-squares sense. Eigenvalues are
/// ordered by magnitude.
pub fn single_pass_evd_with(
    stream: &mut MatrixStream<'_>,
    k: usize,
    p: usize,
    seed: u64,
    opts: SinglePassOptions,
) -> Result<LowRankEvd> {
    let (m, n) = stream.shape();
    if m != n {
        return Err(Error::shape(format!("single-pass EVD needs a square matrix, got {m}x{n}")));
    }
    check_rank(k, p, m, n)?;
    let ell = k + p;
    let g = gaussian(seed, n, ell);
    let mut y = DenseMatrix::zeros(n, ell);
    stream.traverse(|c0, blk| {
        let rows = g.submatrix(c0..c0 + blk.cols(), 0..ell);
        y = y.add(&blk.matmul(&rows));
    })?;
    let width = if opts.full_width { ell } else { k };
    let q = dominant_basis(&y, width)?;
    let mut warnings = Vec::new();
    let c = hermitian_least_squares(&q.tr_matmul(&g), &q.tr_matmul(&y), &mut warnings)?;
    let (vals, vecs) = sym_eig(&c)?;
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[b].abs().total_cmp(&vals[a].abs()));
    let mut out = LowRankEvd {
        u: q.matmul(&vecs.select_columns(&order)),
        lambda: order.iter().map(|&i| vals[i]).collect(),
        warnings,
    };
    out.truncate(k);
    Ok(out)
}

/// Single-pass SVD of a general matrix: one traversal forms both
/// `Y_c = A G_c` and `Y_r = Aᵀ G_r`; `C` solves
/// `(G_rᵀ Q_c) C = Y_rᵀ Q_r` and `C (Q_rᵀ G_c) = Q_cᵀ Y_c` jointly in the
/// least-squares sense. `G_c` and `G_r` use seeds `derive_seed(seed, 0)` and
/// `derive_seed(seed, 1)`.
pub fn single_pass_svd(stream: &mut MatrixStream<'_>, k: usize, p: usize, seed: u64) -> Result<SinglePassSvd> {
    single_pass_svd_with(stream, k, p, seed, SinglePassOptions::default())
}

pub fn single_pass_svd_with(
    stream: &mut MatrixStream<'_>,
    k: usize,
    p: usize,
    seed: u64,
    opts: SinglePassOptions,
) -> Result<SinglePassSvd> {
    let (m, n) = stream.shape();
    check_rank(k, p, m, n)?;
    let ell = k + p;
    let gc = gaussian(derive_seed(seed, 0), n, ell);
    let gr = gaussian(derive_seed(seed, 1), m, ell);
    let mut yc = DenseMatrix::zeros(m, ell);
    let mut yr = DenseMatrix::zeros(n, ell);
    stream.traverse(|c0, blk| {
        let rows = gc.submatrix(c0..c0 + blk.cols(), 0..ell);
        yc = yc.add(&blk.matmul(&rows));
        yr.set_submatrix(c0, 0, &blk.tr_matmul(&gr));
    })?;
    let width = if opts.full_width { ell } else { k };
    let qc = dominant_basis(&yc, width)?;
    let qr = dominant_basis(&yr, width)?;
    let mut warnings = Vec::new();
    let c = joint_least_squares(
        &gr.tr_matmul(&qc),
        &yr.tr_matmul(&qr),
        &qr.tr_matmul(&gc),
        &qc.tr_matmul(&yc),
        &mut warnings,
    )?;
    let small = svd(&c)?;
    let mut factors = SvdFactors { u: qc.matmul(&small.u), s: small.s, v: qr.matmul(&small.v) };
    factors.truncate(k);
    Ok(SinglePassSvd { factors, warnings })
}
