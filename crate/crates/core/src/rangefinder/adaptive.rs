use std::collections::VecDeque;

use super::RangeBasis;
use crate::dense::householder::orthogonalize_against;
use crate::dense::{dot, householder_qr, norm2, DenseMatrix};
use crate::diagnostics::estimate_spectral_norm;
use crate::error::{Error, Result};
use crate::sketch::{derive_seed, gaussian, SketchRng, STREAM_GAUSSIAN};

/// Failure-probability parameter used by the certified range finder and by
/// spectral-norm stopping.
pub const CERTIFY_ALPHA: f64 = 0.1;

/// How the greedy algorithm picks its next sample vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyStrategy {
    /// Largest remaining column (column-pivoted Gram–Schmidt).
    LargestColumn,
    /// `y = A_k g` for a Gaussian `g`.
    Random,
    /// `y = (A_k A_kᵀ)^q A_k g`.
    RandomPower(usize),
    /// Dominant left singular vector of the remainder, via a dense SVD.
    /// Only usable as a small-scale oracle.
    #[cfg(any(test, feature = "oracle"))]
    LocallyOptimal,
}

/// Norm used by the greedy and blocked stopping tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopNorm {
    /// Exact Frobenius norm, tracked by down-dating.
    Frobenius,
    /// Randomized spectral-norm bound from this many probes, valid with
    /// probability `1 − CERTIFY_ALPHA^probes` at each check.
    SpectralEstimate { probes: usize },
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param(format!("tolerance must be positive, got {eps}")));
    }
    Ok(())
}

/// Residual bookkeeping for the updating algorithms: the remainder is held
/// explicitly, its Frobenius norm is down-dated from `‖A‖_F` and `‖B‖_F`,
/// and recomputed exactly once the down-dated value approaches the
/// tolerance or its own precision floor.
struct Remainder {
    r: DenseMatrix,
    a_norm: f64,
    b_sq: f64,
    norm: StopNorm,
    checks: u64,
    seed: u64,
}

impl Remainder {
    fn new(a: &DenseMatrix, norm: StopNorm, seed: u64) -> Self {
        Self { r: a.clone(), a_norm: a.frob_norm(), b_sq: 0.0, norm, checks: 0, seed }
    }

    fn exceeds(&mut self, eps: f64) -> Result<bool> {
        match self.norm {
            StopNorm::Frobenius => {
                let down = ((self.a_norm - self.b_sq.sqrt()) * (self.a_norm + self.b_sq.sqrt())).max(0.0).sqrt();
                let floor = 1e-6 * self.a_norm;
                if down > eps && down > floor {
                    return Ok(true);
                }
                Ok(self.r.frob_norm() > eps)
            }
            StopNorm::SpectralEstimate { probes } => {
                self.checks += 1;
                let r = &self.r;
                let est = estimate_spectral_norm(
                    |g| r.matvec(g),
                    r.cols(),
                    probes,
                    CERTIFY_ALPHA,
                    derive_seed(self.seed, u64::MAX - self.checks),
                )?;
                Ok(est > eps)
            }
        }
    }

    /// `R ← R − q b` with `b = qᵀR`; returns `b`.
    fn deflate(&mut self, q: &[f64]) -> Vec<f64> {
        let b = self.r.tr_matvec(q);
        for (j, &bj) in b.iter().enumerate() {
            crate::dense::axpy(-bj, q, self.r.col_mut(j));
        }
        self.b_sq += dot(&b, &b);
        b
    }
}

fn assemble(q: DenseMatrix, rows: Vec<Vec<f64>>, n: usize, residual: f64, pivots: Option<Vec<usize>>) -> RangeBasis {
    let b = DenseMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    RangeBasis { q, b: Some(b), residual_frob: Some(residual), pivots }
}

/// Greedy rank-revealing approximation: grows `Q`, `B` one vector at a time
/// until `‖A − QB‖_F ≤ eps`, maintaining `A = Q B + A_k`.
pub fn greedy_lowrank(a: &DenseMatrix, eps: f64, strategy: GreedyStrategy, seed: u64) -> Result<RangeBasis> {
    greedy_lowrank_with(a, eps, strategy, seed, StopNorm::Frobenius)
}

/// [`greedy_lowrank`] with a choice of stopping norm.
pub fn greedy_lowrank_with(
    a: &DenseMatrix,
    eps: f64,
    strategy: GreedyStrategy,
    seed: u64,
    norm: StopNorm,
) -> Result<RangeBasis> {
    check_eps(eps)?;
    let (m, n) = a.shape();
    let cap = m.min(n);
    let mut rem = Remainder::new(a, norm, seed);
    let mut rng = SketchRng::new(seed, STREAM_GAUSSIAN);
    let mut q = DenseMatrix::zeros(m, 0);
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    let tiny = 1e-14 * rem.a_norm;
    let mut g = vec![0.0; n];

    while q.cols() < cap && rem.exceeds(eps)? {
        let y = match strategy {
            GreedyStrategy::LargestColumn => {
                let (j, _) =
                    (0..n)
                        .map(|j| (j, norm2(rem.r.col(j))))
                        .fold((0, -1.0), |best, c| if c.1 > best.1 { c } else { best });
                pivots.push(j);
                rem.r.col(j).to_vec()
            }
            GreedyStrategy::Random | GreedyStrategy::RandomPower(_) => {
                rng.fill_normal(&mut g);
                let mut y = rem.r.matvec(&g);
                if let GreedyStrategy::RandomPower(steps) = strategy {
                    for _ in 0..steps {
                        y = rem.r.matvec(&rem.r.tr_matvec(&y));
                    }
                }
                y
            }
            #[cfg(any(test, feature = "oracle"))]
            GreedyStrategy::LocallyOptimal => crate::dense::svd(&rem.r)?.u.col(0).to_vec(),
        };
        let Some(qv) = orthogonalize_against(&q, &y, tiny.max(f64::MIN_POSITIVE)) else {
            break;
        };
        let b = rem.deflate(&qv);
        q.push_column(&qv);
        rows.push(b);
    }
    let residual = rem.r.frob_norm();
    let pivots = (strategy == GreedyStrategy::LargestColumn).then_some(pivots);
    Ok(assemble(q, rows, n, residual, pivots))
}

/// Blocked greedy approximation: adds `b` basis vectors per step from
/// `(A_k A_kᵀ)^q A_k G`, until `‖A − QB‖_F ≤ eps`.
///
/// Each new block is orthonormalized by Householder QR, so it always
/// contributes `b` columns (fewer only when capped by `min(m, n)`), and is
/// projected against the accumulated basis twice before acceptance.
pub fn blocked_adaptive(a: &DenseMatrix, eps: f64, b: usize, q: usize, seed: u64) -> Result<RangeBasis> {
    check_eps(eps)?;
    if b == 0 {
        return Err(Error::param("block size must be at least 1"));
    }
    let (m, n) = a.shape();
    let cap = m.min(n);
    let mut rem = Remainder::new(a, StopNorm::Frobenius, seed);
    let mut basis = DenseMatrix::zeros(m, 0);
    let mut rows = Vec::new();
    let mut step = 0u64;
    while basis.cols() < cap && rem.exceeds(eps)? {
        let width = b.min(cap - basis.cols());
        let g = gaussian(derive_seed(seed, step), n, width);
        step += 1;
        let mut y = rem.r.matmul(&g);
        for _ in 0..q {
            y = rem.r.matmul(&rem.r.tr_matmul(&y));
        }
        let mut q_new = householder_qr(&y).0;
        if basis.cols() > 0 {
            for _ in 0..2 {
                let c = basis.tr_matmul(&q_new);
                q_new.sub_product_assign(&basis, &c);
            }
            q_new = householder_qr(&q_new).0;
        }
        for j in 0..q_new.cols() {
            let col = q_new.col(j).to_vec();
            rows.push(rem.deflate(&col));
            basis.push_column(&col);
        }
    }
    let residual = rem.r.frob_norm();
    Ok(assemble(basis, rows, n, residual, None))
}

/// Probability `1 − min(m, n)·10^{−r}` with which the certified range
/// finder meets its tolerance (clamped at zero).
pub fn certified_probability(m: usize, n: usize, r: usize) -> f64 {
    (1.0 - m.min(n) as f64 * 10f64.powi(-(r as i32))).max(0.0)
}

/// Range finder that never updates `A`: keeps a window of `r` projected
/// samples and stops once all of them are below `ε/(10√(2/π))`, so that
/// `‖A − QQᵀA‖ ≤ ε` holds with probability at least
/// [`certified_probability`].
///
/// A sample whose norm collapses below `1e-12` of its unprojected norm
/// carries no new direction; it is discarded and replaced by a fresh draw.
/// After `10·r` consecutive discards the range is taken as exhausted.
pub fn certified_range(a: &DenseMatrix, eps: f64, r: usize, seed: u64) -> Result<RangeBasis> {
    check_eps(eps)?;
    if r == 0 {
        return Err(Error::param("certification window r must be at least 1"));
    }
    let (m, n) = a.shape();
    let cap = m.min(n);
    let threshold = eps / (10.0 * (2.0 / std::f64::consts::PI).sqrt());
    let mut rng = SketchRng::new(seed, STREAM_GAUSSIAN);
    let mut g = vec![0.0; n];
    let mut q = DenseMatrix::zeros(m, 0);

    // Each entry: (sample, norm of A·g before any projection).
    let mut draw = |q: &DenseMatrix| -> (Vec<f64>, f64) {
        rng.fill_normal(&mut g);
        let mut y = a.matvec(&g);
        let raw = norm2(&y);
        for k in 0..q.cols() {
            let c = dot(q.col(k), &y);
            crate::dense::axpy(-c, q.col(k), &mut y);
        }
        (y, raw)
    };
    let mut window: VecDeque<(Vec<f64>, f64)> = (0..r).map(|_| draw(&q)).collect();
    let mut discards = 0;

    while q.cols() < cap && window.iter().any(|(y, _)| norm2(y) > threshold) {
        let (mut y, raw) = window.pop_front().expect("window holds r samples");
        for k in 0..q.cols() {
            let c = dot(q.col(k), &y);
            crate::dense::axpy(-c, q.col(k), &mut y);
        }
        let nrm = norm2(&y);
        if !(nrm > 1e-12 * raw) {
            discards += 1;
            if discards >= 10 * r {
                break;
            }
            window.push_back(draw(&q));
            continue;
        }
        discards = 0;
        y.iter_mut().for_each(|v| *v /= nrm);
        q.push_column(&y);
        window.push_back(draw(&q));
        let last = window.len() - 1;
        for (yi, _) in window.iter_mut().take(last) {
            let c = dot(&y, yi);
            crate::dense::axpy(-c, &y, yi);
        }
    }
    Ok(RangeBasis::with_cofactor(a, q))
}
