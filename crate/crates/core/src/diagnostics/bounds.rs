use crate::error::{Error, Result};

/// Which closed-form bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Expected Frobenius error of `Q = orth(AG)`.
    FrobExpectation,
    /// Expected spectral error of `Q = orth(AG)`.
    SpectralExpectation,
    /// Spectral error threshold exceeded with probability at most `3e^{-p}`.
    SpectralTail,
    /// Expected spectral error with `q` steps of power iteration.
    PowerExpectation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundSpec {
    pub kind: BoundKind,
    pub k: usize,
    pub p: usize,
    /// Power-iteration steps; read only by [`BoundKind::PowerExpectation`].
    pub q: usize,
    /// All singular values of the target matrix, nonincreasing.
    pub singvals: Vec<f64>,
}

/// `(Σ_{j>k} σ_j²)^{1/2}`, the optimal rank-k Frobenius error.
pub fn tail_frob(singvals: &[f64], k: usize) -> f64 {
    singvals.iter().skip(k).map(|s| s * s).sum::<f64>().sqrt()
}

/// Evaluates the right-hand side of the selected bound.
pub fn error_bound(spec: &BoundSpec) -> Result<f64> {
    let BoundSpec { kind, k, p, q, ref singvals } = *spec;
    let min_p = if kind == BoundKind::SpectralTail { 4 } else { 2 };
    if p < min_p {
        return Err(Error::param(format!("{kind:?} needs p >= {min_p}, got {p}")));
    }
    if k + p > singvals.len() {
        return Err(Error::param(format!("k + p = {} exceeds the {} singular values supplied", k + p, singvals.len())));
    }
    let (kf, pf) = (k as f64, p as f64);
    let sigma_next = singvals[k];
    let tail = tail_frob(singvals, k);
    let e = std::f64::consts::E;
    Ok(match kind {
        BoundKind::FrobExpectation => (1.0 + kf / (pf - 1.0)).sqrt() * tail,
        BoundKind::SpectralExpectation => {
            (1.0 + (kf / (pf - 1.0)).sqrt()) * sigma_next + e * (kf + pf).sqrt() / pf * tail
        }
        BoundKind::SpectralTail => {
            (1.0 + 17.0 * (1.0 + kf / pf).sqrt()) * sigma_next + 8.0 * (kf + pf).sqrt() / (pf + 1.0) * tail
        }
        BoundKind::PowerExpectation => {
            let exp = (2 * q + 1) as i32;
            let powered: f64 = singvals[k..].iter().map(|s| s.powi(2 * exp)).sum::<f64>().sqrt();
            let inner = (1.0 + (kf / (pf - 1.0)).sqrt()) * sigma_next.powi(exp) + e * (kf + pf).sqrt() / pf * powered;
            inner.powf(1.0 / exp as f64)
        }
    })
}
