//! One-sided Jacobi SVD and two-sided Jacobi symmetric eigensolver.

use super::householder::{cpqr_with_floor, orthogonalize_against, CpqrStop};
use super::matrix::{dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 30;

/// Thin singular value decomposition `A = U diag(s) Vᵀ`, singular values
/// in nonincreasing order.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// m×r with orthonormal columns, r = min(m, n).
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    /// n×r with orthonormal columns.
    pub v: DenseMatrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for (j, &s) in self.s.iter().enumerate() {
            us.col_mut(j).iter_mut().for_each(|x| *x *= s);
        }
        us.matmul_tr(&self.v)
    }

    /// Keeps the leading `k` triplets.
    pub fn truncate(&mut self, k: usize) {
        let k = k.min(self.s.len());
        self.s.truncate(k);
        self.u.truncate_columns(k);
        self.v.truncate_columns(k);
    }
}

/// Thin SVD by one-sided (Hestenes) Jacobi applied to `Rᵀ`, where
/// `A P = Q R` is a column-pivoted QR factorization. The pivoting grades the
/// rows of `R`, which makes the sweeps converge quickly even when many
/// singular values sit at the rounding floor. Wide inputs go through `Aᵀ`.
pub fn svd(a: &DenseMatrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    if m < n {
        let f = svd(&a.transpose())?;
        return Ok(SvdFactors { u: f.v, s: f.s, v: f.u });
    }
    let pre = cpqr_with_floor(a, CpqrStop::Full, 0.0);
    let r = pre.r.rows();
    // Rᵀ J = W: then R = J Σ Uₓᵀ with Uₓ the normalized columns of W.
    let (w, j) = jacobi(pre.r.transpose(), true)?;
    let qj = pre.q.matmul(&j.expect("accumulated"));
    let mut order: Vec<(usize, f64)> = (0..r).map(|c| (c, norm2(w.col(c)))).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));

    let mut s = Vec::with_capacity(n);
    let mut u = DenseMatrix::zeros(m, 0);
    let mut vp = DenseMatrix::zeros(n, 0);
    let mut u_pending = Vec::new();
    let mut v_pending = Vec::new();
    for (k, &(c, sc)) in order.iter().enumerate() {
        s.push(sc);
        u.push_column(qj.col(c));
        if sc > 0.0 {
            let inv = 1.0 / sc;
            let col: Vec<f64> = w.col(c).iter().map(|x| x * inv).collect();
            vp.push_column(&col);
        } else {
            v_pending.push(k);
            vp.push_column(&vec![0.0; n]);
        }
    }
    for k in r..n {
        s.push(0.0);
        u_pending.push(k);
        v_pending.push(k);
        u.push_column(&vec![0.0; m]);
        vp.push_column(&vec![0.0; n]);
    }
    complete_basis(&mut u, &u_pending);
    complete_basis(&mut vp, &v_pending);
    // Undo the column permutation: row perm[i] of V is row i of Vₚ.
    let mut v = DenseMatrix::zeros(n, n);
    for c in 0..n {
        for (i, &pi) in pre.perm.iter().enumerate() {
            v.col_mut(c)[pi] = vp[(i, c)];
        }
    }
    Ok(SvdFactors { u, s, v })
}

/// Singular values only, in nonincreasing order.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    if m < n {
        return singular_values(&a.transpose());
    }
    let pre = cpqr_with_floor(a, CpqrStop::Full, 0.0);
    let (w, _) = jacobi(pre.r.transpose(), false)?;
    let mut s: Vec<f64> = (0..w.cols()).map(|c| norm2(w.col(c))).collect();
    s.resize(n, 0.0);
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Fills the zero columns listed in `pending` with unit vectors orthogonal to
/// all other columns of `u`.
fn complete_basis(u: &mut DenseMatrix, pending: &[usize]) {
    if pending.is_empty() {
        return;
    }
    let m = u.rows();
    let keep: Vec<usize> = (0..u.cols()).filter(|j| !pending.contains(j)).collect();
    let mut basis = u.select_columns(&keep);
    let mut candidate = 0;
    for &k in pending {
        while candidate < m {
            let mut e = vec![0.0; m];
            e[candidate] = 1.0;
            candidate += 1;
            if let Some(v) = orthogonalize_against(&basis, &e, 0.5) {
                u.col_mut(k).copy_from_slice(&v);
                basis.push_column(&v);
                break;
            }
        }
    }
}

/// Orthogonalizes the columns of `w` by plane rotations; returns the rotated
/// matrix and, optionally, the accumulated rotation.
fn jacobi(mut w: DenseMatrix, want_v: bool) -> Result<(DenseMatrix, Option<DenseMatrix>)> {
    let (m, n) = w.shape();
    let mut v = want_v.then(|| DenseMatrix::identity(n));
    let tol = f64::EPSILON * (m.max(1) as f64);
    // Work at unit scale so squared column norms neither overflow nor
    // underflow.
    let scale = w.max_abs();
    if scale > 0.0 && scale.is_finite() {
        w = w.scale(1.0 / scale);
    }
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(w.col(p), w.col(p));
                let beta = dot(w.col(q), w.col(q));
                let gamma = dot(w.col(p), w.col(q));
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= tol * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, c, s);
                if let Some(v) = v.as_mut() {
                    rotate(v, p, q, c, s);
                }
            }
        }
        if !rotated {
            if scale > 0.0 && scale.is_finite() {
                w = w.scale(scale);
            }
            return Ok((w, v));
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

#[inline]
fn rotate(w: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let (cp, cq) = w.col_pair_mut(p, q);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic two-sided Jacobi.
/// Only the upper triangle is referenced. Eigenvalues are returned in
/// nonincreasing order with matching eigenvector columns.
pub fn sym_eig(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::shape(format!("sym_eig needs a square matrix, got {}x{}", n, a.cols())));
    }
    let mut s = DenseMatrix::from_fn(n, n, |i, j| if i <= j { a[(i, j)] } else { a[(j, i)] });
    let mut v = DenseMatrix::identity(n);
    let scale = s.frob_norm();
    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0;
        for j in 0..n {
            for i in 0..j {
                off += s[(i, j)] * s[(i, j)];
            }
        }
        if off.sqrt() <= f64::EPSILON * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = s[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (s[(q, q)] - s[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                // S ← Jᵀ S J with J the rotation in the (p, q) plane.
                rotate(&mut s, p, q, c, sn);
                for k in 0..n {
                    let (x, y) = (s[(p, k)], s[(q, k)]);
                    s[(p, k)] = c * x - sn * y;
                    s[(q, k)] = sn * x + c * y;
                }
                s[(p, q)] = 0.0;
                s[(q, p)] = 0.0;
                rotate(&mut v, p, q, c, sn);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| s[(y, y)].total_cmp(&s[(x, x)]));
    let vals = order.iter().map(|&j| s[(j, j)]).collect();
    Ok((vals, v.select_columns(&order)))
}
