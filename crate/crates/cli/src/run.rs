//! Algorithm dispatch and run reports.

use std::str::FromStr;
use std::time::Instant;

use randfact_core::dense::{singular_values, svd};
use randfact_core::diagnostics::{estimate_spectral_norm, tail_frob};
use randfact_core::fullfact::{hqrrp, randutv};
use randfact_core::lowrank::{
    fast_randomized_id, nystrom_evd, randomized_cur, randomized_id, rsvd, single_pass_evd, single_pass_svd,
    MatrixStream,
};
use randfact_core::rangefinder::{blocked_adaptive, certified_probability, certified_range};
use randfact_core::sketch::derive_seed;
use randfact_core::{DenseMatrix, Warning};
use serde::Serialize;

use crate::error::{CliError, Result};

pub const SCHEMA: &str = "randfact/1";

/// Probes and failure parameter for the spectral-norm estimates in reports.
pub const SPECTRAL_PROBES: usize = 10;
pub const SPECTRAL_ALPHA: f64 = 0.1;

/// Largest `m·n` for which reports include a dense SVD oracle comparison.
pub const ORACLE_LIMIT: usize = 400 * 400;

/// Row/column block used when feeding single-pass algorithms.
const STREAM_BLOCK: usize = 64;

const DEFAULT_P: usize = 10;
const DEFAULT_BLOCK: usize = 32;
const DEFAULT_ADAPTIVE_BLOCK: usize = 10;
const DEFAULT_UTV_Q: usize = 2;
const DEFAULT_R: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Rsvd,
    Spevd,
    Spsvd,
    Nystrom,
    Id,
    FastId,
    Cur,
    Adaptive,
    Blocked,
    Hqrrp,
    Randutv,
}

impl Algorithm {
    pub const ALL: [Algorithm; 11] = [
        Algorithm::Rsvd,
        Algorithm::Spevd,
        Algorithm::Spsvd,
        Algorithm::Nystrom,
        Algorithm::Id,
        Algorithm::FastId,
        Algorithm::Cur,
        Algorithm::Adaptive,
        Algorithm::Blocked,
        Algorithm::Hqrrp,
        Algorithm::Randutv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rsvd => "rsvd",
            Algorithm::Spevd => "spevd",
            Algorithm::Spsvd => "spsvd",
            Algorithm::Nystrom => "nystrom",
            Algorithm::Id => "id",
            Algorithm::FastId => "fastid",
            Algorithm::Cur => "cur",
            Algorithm::Adaptive => "adaptive",
            Algorithm::Blocked => "blocked",
            Algorithm::Hqrrp => "hqrrp",
            Algorithm::Randutv => "randutv",
        }
    }

    fn needs_rank(self) -> bool {
        !matches!(self, Algorithm::Adaptive | Algorithm::Blocked | Algorithm::Hqrrp | Algorithm::Randutv)
    }
}

impl FromStr for Algorithm {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| {
            let known: Vec<&str> = Algorithm::ALL.iter().map(|a| a.name()).collect();
            CliError::Parse(format!("unknown algorithm '{s}' (expected one of {})", known.join(", ")))
        })
    }
}

/// Parameters as given on the command line; unset values take
/// per-algorithm defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Params {
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub b: Option<usize>,
    pub eps: Option<f64>,
    pub r: Option<usize>,
    pub seed: u64,
}

/// Parameters actually used by a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct UsedParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub eps: f64,
    pub r: usize,
    /// `1 − min(m, n)·10^{−r}`.
    pub probability: f64,
    pub statement: String,
}

/// Output of one factorization, reduced to what reports need.
#[derive(Debug, Clone)]
pub struct Approximation {
    /// The product of the returned factors.
    pub approx: DenseMatrix,
    pub rank: usize,
    pub params: UsedParams,
    pub warnings: Vec<String>,
    /// `|T_jj|` for randUTV.
    pub diagonal: Option<Vec<f64>>,
    pub certificate: Option<Certificate>,
    pub seconds: f64,
}

fn describe(w: &Warning) -> String {
    match w {
        Warning::IllConditioned { what, condition } => format!("{what} is ill-conditioned (condition {condition:.3e})"),
        Warning::RankTruncated { requested, detected } => {
            format!("requested rank {requested} exceeds detected numerical rank {detected}")
        }
        Warning::ShiftApplied { shift } => format!("diagonal shift {shift:.3e} applied to rescue Cholesky"),
    }
}

fn require_eps(algo: Algorithm, eps: Option<f64>) -> Result<f64> {
    eps.ok_or_else(|| CliError::Parameter(format!("--eps is required for {}", algo.name())))
}

/// Runs `algo` on `a` and multiplies the returned factors back together.
pub fn factorize(algo: Algorithm, a: &DenseMatrix, params: &Params) -> Result<Approximation> {
    let (m, n) = a.shape();
    let seed = params.seed;
    let mut used = UsedParams { seed, ..UsedParams::default() };
    let k = if algo.needs_rank() {
        let k = params.k.ok_or_else(|| CliError::Parameter(format!("--k is required for {}", algo.name())))?;
        used.k = Some(k);
        k
    } else {
        0
    };
    let p = params.p.unwrap_or_else(|| DEFAULT_P.min(m.min(n).saturating_sub(k)));

    let start = Instant::now();
    let mut warnings = Vec::new();
    let mut diagonal = None;
    let mut certificate = None;
    let approx = match algo {
        Algorithm::Rsvd => {
            let q = params.q.unwrap_or(0);
            (used.p, used.q) = (Some(p), Some(q));
            rsvd(a, k, p, q, seed)?.reconstruct()
        }
        Algorithm::Spevd => {
            used.p = Some(p);
            let mut stream = MatrixStream::from_matrix(a, STREAM_BLOCK);
            let f = single_pass_evd(&mut stream, k, p, seed)?;
            warnings.extend(f.warnings.iter().map(describe));
            f.reconstruct()
        }
        Algorithm::Spsvd => {
            used.p = Some(p);
            let mut stream = MatrixStream::from_matrix(a, STREAM_BLOCK);
            let f = single_pass_svd(&mut stream, k, p, seed)?;
            warnings.extend(f.warnings.iter().map(describe));
            f.factors.reconstruct()
        }
        Algorithm::Nystrom => {
            used.p = Some(p);
            let f = nystrom_evd(a, k, p, seed)?;
            warnings.extend(f.warnings.iter().map(describe));
            f.reconstruct()
        }
        Algorithm::Id => {
            let q = params.q.unwrap_or(0);
            (used.p, used.q) = (Some(p), Some(q));
            let f = randomized_id(a, k, p, q, seed)?;
            warnings.extend(f.warnings.iter().map(describe));
            f.reconstruct(a)
        }
        Algorithm::FastId => {
            used.p = Some(p);
            let f = fast_randomized_id(a, k, p, seed)?;
            warnings.extend(f.warnings.iter().map(describe));
            f.reconstruct(a)
        }
        Algorithm::Cur => {
            let q = params.q.unwrap_or(0);
            (used.p, used.q) = (Some(p), Some(q));
            let f = randomized_cur(a, k, p, q, seed)?;
            warnings.extend(f.warnings.iter().map(describe));
            f.reconstruct(a)
        }
        Algorithm::Adaptive => {
            let eps = require_eps(algo, params.eps)?;
            let r = params.r.unwrap_or(DEFAULT_R);
            (used.eps, used.r) = (Some(eps), Some(r));
            let basis = certified_range(a, eps, r, seed)?;
            let probability = certified_probability(m, n, r);
            certificate = Some(Certificate {
                eps,
                r,
                probability,
                statement: format!("‖A − QQᵀA‖ ≤ {eps:e} holds with probability at least {probability}"),
            });
            basis.q.matmul(&basis.q.tr_matmul(a))
        }
        Algorithm::Blocked => {
            let eps = require_eps(algo, params.eps)?;
            let (b, q) = (params.b.unwrap_or(DEFAULT_ADAPTIVE_BLOCK), params.q.unwrap_or(0));
            (used.eps, used.b, used.q) = (Some(eps), Some(b), Some(q));
            let basis = blocked_adaptive(a, eps, b, q, seed)?;
            basis.q.matmul(&basis.q.tr_matmul(a))
        }
        Algorithm::Hqrrp => {
            let (b, over) = (params.b.unwrap_or(DEFAULT_BLOCK), params.p.unwrap_or(DEFAULT_P));
            (used.b, used.p) = (Some(b), Some(over));
            hqrrp(a, b, over, seed)?.reconstruct()
        }
        Algorithm::Randutv => {
            let (b, q) = (params.b.unwrap_or(DEFAULT_BLOCK), params.q.unwrap_or(DEFAULT_UTV_Q));
            (used.b, used.q) = (Some(b), Some(q));
            let f = randutv(a, b, q, seed)?;
            diagonal = Some(f.diagonal().iter().map(|d| d.abs()).collect());
            f.reconstruct()
        }
    };
    let seconds = start.elapsed().as_secs_f64();
    let rank = match algo {
        Algorithm::Hqrrp | Algorithm::Randutv => m.min(n),
        Algorithm::Adaptive | Algorithm::Blocked => numerical_rank(&approx)?,
        _ => k,
    };
    Ok(Approximation { approx, rank, params: used, warnings, diagonal, certificate, seconds })
}

/// Rank of a product `QQᵀA`, read off its singular values.
fn numerical_rank(x: &DenseMatrix) -> Result<usize> {
    let s = singular_values(x)?;
    let tol = s.first().copied().unwrap_or(0.0) * 1e-12 * x.rows().max(x.cols()) as f64;
    Ok(s.iter().filter(|&&v| v > tol).count())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub source: String,
    pub rows: usize,
    pub cols: usize,
    pub frob_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub value: f64,
    pub probes: usize,
    pub alpha: f64,
    /// `1 − α^probes`.
    pub confidence: f64,
    pub kind: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub singular_values: Vec<f64>,
    /// Smallest Frobenius error of any approximation with the reported rank.
    pub optimal_err_frob: f64,
    /// Smallest spectral error of any approximation with the reported rank.
    pub optimal_err_spectral: f64,
    /// `err_frob / optimal_err_frob`, absent when the optimum is zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frob_ratio: Option<f64>,
    /// Largest relative gap between the randUTV diagonal and the singular
    /// values, over values at least `1e-8·σ₁`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal_max_rel_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub algorithm: &'static str,
    pub parameters: UsedParams,
    pub matrix: Provenance,
    pub rank: usize,
    /// `‖A − reconstruct(factors)‖_F`.
    pub err_frob: f64,
    pub rel_err_frob: f64,
    pub err_spectral: SpectralEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagonal: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    pub warnings: Vec<String>,
    pub wall_clock_seconds: f64,
    pub deterministic: bool,
}

/// Builds the report for a finished run; every error is recomputed from
/// `run.approx`.
pub fn report(
    algo: Algorithm,
    a: &DenseMatrix,
    run: &Approximation,
    source: &str,
    deterministic: bool,
) -> Result<RunReport> {
    let (m, n) = a.shape();
    let residual = a.sub(&run.approx);
    let err_frob = residual.frob_norm();
    let norm = a.frob_norm();
    let value = estimate_spectral_norm(
        |g| residual.matvec(g),
        n,
        SPECTRAL_PROBES,
        SPECTRAL_ALPHA,
        derive_seed(run.params.seed, 0x5e57),
    )?;
    let err_spectral = SpectralEstimate {
        value,
        probes: SPECTRAL_PROBES,
        alpha: SPECTRAL_ALPHA,
        confidence: 1.0 - SPECTRAL_ALPHA.powi(SPECTRAL_PROBES as i32),
        kind: "probabilistic upper bound",
    };
    let oracle = if m * n <= ORACLE_LIMIT { Some(oracle(a, run, err_frob)?) } else { None };
    Ok(RunReport {
        schema: SCHEMA,
        algorithm: algo.name(),
        parameters: run.params,
        matrix: Provenance { source: source.to_string(), rows: m, cols: n, frob_norm: norm },
        rank: run.rank,
        err_frob,
        rel_err_frob: if norm > 0.0 { err_frob / norm } else { 0.0 },
        err_spectral,
        oracle,
        diagonal: run.diagonal.clone(),
        certificate: run.certificate.clone(),
        warnings: run.warnings.clone(),
        wall_clock_seconds: run.seconds,
        deterministic,
    })
}

fn oracle(a: &DenseMatrix, run: &Approximation, err_frob: f64) -> Result<OracleComparison> {
    let s = svd(a)?.s;
    let optimal_err_frob = tail_frob(&s, run.rank);
    let optimal_err_spectral = s.get(run.rank).copied().unwrap_or(0.0);
    let diagonal_max_rel_deviation = run.diagonal.as_ref().map(|d| {
        s.iter()
            .zip(d)
            .take_while(|(sj, _)| **sj >= 1e-8 * s[0])
            .map(|(sj, dj)| (dj - sj).abs() / sj)
            .fold(0.0, f64::max)
    });
    Ok(OracleComparison {
        frob_ratio: (optimal_err_frob > 0.0).then(|| err_frob / optimal_err_frob),
        singular_values: s,
        optimal_err_frob,
        optimal_err_spectral,
        diagonal_max_rel_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_names_round_trip() {
        for algo in Algorithm::ALL {
            assert_eq!(algo.name().parse::<Algorithm>().unwrap(), algo);
        }
        assert!(matches!("svd".parse::<Algorithm>(), Err(CliError::Parse(_))));
    }

    #[test]
    fn missing_required_parameters() {
        let a = DenseMatrix::identity(4);
        let p = Params::default();
        assert!(matches!(factorize(Algorithm::Rsvd, &a, &p), Err(CliError::Parameter(_))));
        assert!(matches!(factorize(Algorithm::Adaptive, &a, &p), Err(CliError::Parameter(_))));
    }

    #[test]
    fn default_oversampling_fits_the_matrix() {
        let a = DenseMatrix::identity(6);
        let run = factorize(Algorithm::Rsvd, &a, &Params { k: Some(4), ..Params::default() }).unwrap();
        assert_eq!(run.params.p, Some(2));
    }
}
