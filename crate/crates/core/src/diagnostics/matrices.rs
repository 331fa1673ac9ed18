use crate::dense::{householder_qr, DenseMatrix};
use crate::error::{Error, Result};
use crate::sketch::{derive_seed, gaussian};

/// Singular-value profiles for planted test matrices. Profiles are evaluated
/// at length `min(m, n)` and indexed from `j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    /// `σ_j = β^{j−1}`.
    FastDecay { beta: f64 },
    /// Linear ramp from 1 down towards `tail` over the first `k` values,
    /// then `σ_j = tail` for all `j > k`.
    FlatTail { k: usize, tail: f64 },
    /// `σ_j = 1/j` for `j ≤ k`, zero afterwards.
    ExactRank { k: usize },
    /// Explicit values, padded with zeros.
    Explicit(Vec<f64>),
}

impl Spectrum {
    pub fn values(&self, len: usize) -> Result<Vec<f64>> {
        Ok(match self {
            Spectrum::FastDecay { beta } => {
                if !(*beta > 0.0 && *beta < 1.0) {
                    return Err(Error::param(format!("decay rate must lie in (0, 1), got {beta}")));
                }
                (0..len).map(|j| beta.powi(j as i32)).collect()
            }
            Spectrum::FlatTail { k, tail } => {
                if !(*tail > 0.0 && *tail <= 1.0) {
                    return Err(Error::param(format!("tail level must lie in (0, 1], got {tail}")));
                }
                let kf = *k as f64;
                (0..len).map(|j| if j < *k { tail + (1.0 - tail) * (kf - j as f64) / kf } else { *tail }).collect()
            }
            Spectrum::ExactRank { k } => {
                if *k > len {
                    return Err(Error::param(format!("rank {k} exceeds min(m, n) = {len}")));
                }
                (0..len).map(|j| if j < *k { 1.0 / (j + 1) as f64 } else { 0.0 }).collect()
            }
            Spectrum::Explicit(v) => {
                if v.len() > len {
                    return Err(Error::param(format!("{} singular values for min(m, n) = {len}", v.len())));
                }
                if v.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                    return Err(Error::param("singular values must be finite and nonnegative"));
                }
                let mut out = v.clone();
                out.resize(len, 0.0);
                out
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestMatrixKind {
    /// `U diag(σ) Vᵀ` with independent Haar bases.
    Planted(Spectrum),
    /// `W diag(σ) Wᵀ`, symmetric positive semidefinite (square only).
    Psd(Spectrum),
    /// Upper-triangular Kahan matrix (square only), see [`kahan`].
    Kahan { theta: f64 },
}

/// A generated matrix together with the factors it was built from.
#[derive(Debug, Clone)]
pub struct PlantedMatrix {
    pub a: DenseMatrix,
    pub u: DenseMatrix,
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

/// m×k matrix with Haar-distributed orthonormal columns: the Q factor of a
/// Gaussian matrix, with R's diagonal made nonnegative.
pub fn haar(m: usize, k: usize, seed: u64) -> DenseMatrix {
    householder_qr(&gaussian(seed, m, k)).0
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::param(format!("dimensions must be positive, got {m}x{n}")));
    }
    Ok(())
}

/// `U diag(σ) Vᵀ` with `U = haar(m, r, derive_seed(seed, 0))`,
/// `V = haar(n, r, derive_seed(seed, 1))`, `r = min(m, n)`.
pub fn planted(spectrum: &Spectrum, m: usize, n: usize, seed: u64) -> Result<PlantedMatrix> {
    check_dims(m, n)?;
    let r = m.min(n);
    let sigma = spectrum.values(r)?;
    let u = haar(m, r, derive_seed(seed, 0));
    let v = haar(n, r, derive_seed(seed, 1));
    let a = scale_columns(&u, &sigma).matmul_tr(&v);
    Ok(PlantedMatrix { a, u, sigma, v })
}

/// `W diag(σ) Wᵀ` with `W = haar(n, n, derive_seed(seed, 0))`.
pub fn planted_psd(spectrum: &Spectrum, n: usize, seed: u64) -> Result<PlantedMatrix> {
    check_dims(n, n)?;
    let sigma = spectrum.values(n)?;
    let w = haar(n, n, derive_seed(seed, 0));
    let mut a = scale_columns(&w, &sigma).matmul_tr(&w);
    // Exact symmetry.
    for j in 0..n {
        for i in 0..j {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Ok(PlantedMatrix { a, u: w.clone(), sigma, v: w })
}

fn scale_columns(u: &DenseMatrix, s: &[f64]) -> DenseMatrix {
    let mut out = u.clone();
    for (j, &sj) in s.iter().enumerate() {
        out.col_mut(j).iter_mut().for_each(|x| *x *= sj);
    }
    out
}

/// Default Kahan angle; at n = 96 pivoted QR under-reveals the smallest
/// singular value by several orders of magnitude.
pub const KAHAN_THETA: f64 = 1.2;

/// Kahan matrix `diag(1, s, …, s^{n−1})·(I − c·N) + 25ε·diag(n, n−1, …, 1)`
/// with `s = sin θ`, `c = cos θ` and `N` the strictly upper-triangular ones.
/// The small diagonal perturbation keeps column pivoting from reordering the
/// columns under rounding.
pub fn kahan(n: usize, theta: f64) -> DenseMatrix {
    let (s, c) = theta.sin_cos();
    let pert = 25.0 * f64::EPSILON;
    DenseMatrix::from_fn(n, n, |i, j| {
        let scale = s.powi(i as i32);
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => scale + pert * (n - i) as f64,
            std::cmp::Ordering::Less => -c * scale,
            std::cmp::Ordering::Greater => 0.0,
        }
    })
}

/// Generates one of the test-matrix families.
pub fn test_matrix(kind: &TestMatrixKind, m: usize, n: usize, seed: u64) -> Result<DenseMatrix> {
    check_dims(m, n)?;
    let square = |name: &str| {
        if m == n {
            Ok(())
        } else {
            Err(Error::param(format!("{name} matrices must be square, got {m}x{n}")))
        }
    };
    match kind {
        TestMatrixKind::Planted(s) => Ok(planted(s, m, n, seed)?.a),
        TestMatrixKind::Psd(s) => {
            square("psd")?;
            Ok(planted_psd(s, n, seed)?.a)
        }
        TestMatrixKind::Kahan { theta } => {
            square("Kahan")?;
            Ok(kahan(n, *theta))
        }
    }
}
