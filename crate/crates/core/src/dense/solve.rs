//! Cholesky, triangular solves, and SVD-based least squares.

use super::matrix::DenseMatrix;
use super::svd::svd;
use crate::error::{Error, Result};

/// Relative cutoff below which singular values are treated as zero by
/// [`pinv`] and [`least_squares`].
pub const PINV_RTOL: f64 = 1e-12;

/// Upper-triangular Cholesky factor `C` with `Cᵀ C = B`.
///
/// `B` must be square; only its upper triangle is read. A pivot that is not
/// larger than `n·ε·max_i B_ii` is reported as [`Error::NotPositiveDefinite`],
/// so numerically singular PSD matrices are rejected.
pub fn cholesky(b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = b.rows();
    if b.cols() != n {
        return Err(Error::shape(format!("cholesky needs a square matrix, got {}x{}", n, b.cols())));
    }
    let max_diag = (0..n).map(|i| b[(i, i)]).fold(0.0_f64, f64::max);
    let floor = f64::EPSILON * n as f64 * max_diag;
    let mut c = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let cj = c.col(j);
        let s: f64 = cj[..j].iter().map(|x| x * x).sum();
        let d = b[(j, j)] - s;
        if !(d > floor) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let d = d.sqrt();
        c[(j, j)] = d;
        for i in j + 1..n {
            let (ci, cj) = (c.col(i), c.col(j));
            let s: f64 = ci[..j].iter().zip(&cj[..j]).map(|(x, y)| x * y).sum();
            c[(j, i)] = (b[(j, i)] - s) / d;
        }
    }
    Ok(c)
}

fn check_diag(r: &DenseMatrix) -> Result<()> {
    for i in 0..r.rows() {
        if r[(i, i)] == 0.0 || !r[(i, i)].is_finite() {
            return Err(Error::Singular { index: i });
        }
    }
    Ok(())
}

/// Solves `R X = B` for upper-triangular `R`.
pub fn solve_upper(r: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let n = r.rows();
    if r.cols() != n || b.rows() != n {
        return Err(Error::shape("solve_upper dimensions"));
    }
    check_diag(r)?;
    let mut x = b.clone();
    for c in 0..x.cols() {
        let xc = x.col_mut(c);
        for i in (0..n).rev() {
            let v = xc[i] / r[(i, i)];
            xc[i] = v;
            let ri = r.col(i);
            for k in 0..i {
                xc[k] -= ri[k] * v;
            }
        }
    }
    Ok(x)
}

/// Solves `X R = B` for upper-triangular `R`.
pub fn solve_upper_right(b: &DenseMatrix, r: &DenseMatrix) -> Result<DenseMatrix> {
    let n = r.rows();
    if r.cols() != n || b.cols() != n {
        return Err(Error::shape("solve_upper_right dimensions"));
    }
    check_diag(r)?;
    let mut x = b.clone();
    for j in 0..n {
        for i in 0..j {
            let rij = r[(i, j)];
            if rij != 0.0 {
                let (xi, xj) = x.col_pair_mut(i, j);
                for (a, b) in xj.iter_mut().zip(xi.iter()) {
                    *a -= rij * b;
                }
            }
        }
        let inv = 1.0 / r[(j, j)];
        x.col_mut(j).iter_mut().for_each(|v| *v *= inv);
    }
    Ok(x)
}

/// Moore–Penrose pseudo-inverse via the SVD, dropping singular values below
/// `PINV_RTOL·σ₁`.
pub fn pinv(a: &DenseMatrix) -> Result<DenseMatrix> {
    let f = svd(a)?;
    let cut = PINV_RTOL * f.s.first().copied().unwrap_or(0.0);
    let mut v = f.v;
    for (j, &s) in f.s.iter().enumerate() {
        let scale = if s > cut && s > 0.0 { 1.0 / s } else { 0.0 };
        v.col_mut(j).iter_mut().for_each(|x| *x *= scale);
    }
    Ok(v.matmul_tr(&f.u))
}

/// Minimum-norm least-squares solution of `M X = B`.
pub fn least_squares(m: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if m.rows() != b.rows() {
        return Err(Error::shape(format!("least squares: system has {} rows, right-hand side {}", m.rows(), b.rows())));
    }
    let f = svd(m)?;
    let cut = PINV_RTOL * f.s.first().copied().unwrap_or(0.0);
    let mut utb = f.u.tr_matmul(b);
    for (j, &s) in f.s.iter().enumerate() {
        let scale = if s > cut && s > 0.0 { 1.0 / s } else { 0.0 };
        for c in 0..utb.cols() {
            utb[(j, c)] *= scale;
        }
    }
    Ok(f.v.matmul(&utb))
}

/// 2-norm condition number `σ₁/σ_r`; infinite when `σ_r = 0`.
pub fn condition_number(a: &DenseMatrix) -> Result<f64> {
    let s = super::svd::singular_values(a)?;
    Ok(match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    })
}
