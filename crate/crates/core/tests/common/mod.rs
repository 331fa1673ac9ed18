//! Oracles and helpers shared by the integration tests. The eigensolver
//! here is deliberately independent of the library's kernels.
#![allow(dead_code)]

use randfact_core::dense::singular_values;
use randfact_core::diagnostics::{planted, PlantedMatrix, Spectrum};
use randfact_core::DenseMatrix;

/// Eigenvalues of a symmetric matrix by classical cyclic Jacobi on a
/// row-major copy, sorted nonincreasing.
pub fn jacobi_eigenvalues(s: &DenseMatrix) -> Vec<f64> {
    let n = s.rows();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| 0.5 * (s[(i, j)] + s[(j, i)])).collect()).collect();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let total: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-34 * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// Singular values from the eigenvalues of the Gram matrix `AᵀA`.
pub fn gram_singular_values(a: &DenseMatrix) -> Vec<f64> {
    let g = if a.rows() >= a.cols() { a.tr_matmul(a) } else { a.matmul_tr(a) };
    jacobi_eigenvalues(&g).into_iter().map(|l| l.max(0.0).sqrt()).collect()
}

pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    singular_values(a).unwrap().first().copied().unwrap_or(0.0)
}

/// `‖A − Q Qᵀ A‖_F`.
pub fn projection_error_frob(a: &DenseMatrix, q: &DenseMatrix) -> f64 {
    a.sub(&q.matmul(&q.tr_matmul(a))).frob_norm()
}

/// `‖A − Q Qᵀ A‖₂` through the dense SVD.
pub fn projection_error_spectral(a: &DenseMatrix, q: &DenseMatrix) -> f64 {
    spectral_norm(&a.sub(&q.matmul(&q.tr_matmul(a))))
}

/// Exact `‖(I − QQᵀ) A‖₂` for a planted `A = U Σ Vᵀ` whose spectrum is flat
/// (equal to `tail`) beyond its first `k` values, with `Q` inside the range
/// of `U`. With `W = UᵀQ` and `D = diag(σ_i² − tail²)` over the head, the
/// squared error is `tail² + λ_max(D^{1/2} (I − W_k W_kᵀ) D^{1/2})`, so only a
/// k×k eigenproblem is needed.
pub fn flat_tail_spectral_error(pm: &PlantedMatrix, k: usize, tail: f64, q: &DenseMatrix) -> f64 {
    let w = pm.u.tr_matmul(q);
    let wk = w.submatrix(0..k, 0..w.cols());
    let proj = DenseMatrix::identity(k).sub(&wk.matmul_tr(&wk));
    let d: Vec<f64> = pm.sigma[..k].iter().map(|s| (s * s - tail * tail).max(0.0).sqrt()).collect();
    let m = DenseMatrix::from_fn(k, k, |i, j| d[i] * proj[(i, j)] * d[j]);
    let top = jacobi_eigenvalues(&m)[0].max(0.0);
    (tail * tail + top).sqrt()
}

/// Planted matrix with a flat tail after `k` values.
pub fn flat_tail(m: usize, n: usize, k: usize, tail: f64, seed: u64) -> PlantedMatrix {
    planted(&Spectrum::FlatTail { k, tail }, m, n, seed).unwrap()
}

pub fn fast_decay(m: usize, n: usize, beta: f64, seed: u64) -> PlantedMatrix {
    planted(&Spectrum::FastDecay { beta }, m, n, seed).unwrap()
}

pub fn exact_rank(m: usize, n: usize, k: usize, seed: u64) -> PlantedMatrix {
    planted(&Spectrum::ExactRank { k }, m, n, seed).unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn rel_err(a: &DenseMatrix, approx: &DenseMatrix) -> f64 {
    a.sub(approx).frob_norm() / a.frob_norm()
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.sub(b).max_abs()
}
