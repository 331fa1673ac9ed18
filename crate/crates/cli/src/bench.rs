//! Size sweeps recording wall-clock and error per run.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use randfact_core::DenseMatrix;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::kind::MatrixKind;
use crate::run::{factorize, Algorithm, Params, SCHEMA};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub kind: MatrixKind,
    /// (rows, cols) per size.
    pub sizes: Vec<(usize, usize)>,
    pub seeds: Vec<u64>,
    /// Shared parameters; the seed field is replaced per run.
    pub params: Params,
    pub threads: usize,
}

/// One (algorithm, size, seed) cell. A failed run keeps its row with
/// `error` set and the measurements absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: &'static str,
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub rank: Option<usize>,
    pub seconds: Option<f64>,
    pub err_frob: Option<f64>,
    pub rel_err_frob: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub schema: &'static str,
    pub kind: String,
    pub threads: usize,
    pub runs: Vec<BenchRow>,
}

/// Parses `N` (square) or `RxC`.
pub fn parse_size(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Parse(format!("bad size '{s}', expected N or RxC"));
    let s = s.trim();
    let (r, c) = match s.split_once(['x', 'X']) {
        Some((r, c)) => (r.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?),
        None => {
            let n = s.parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if r == 0 || c == 0 {
        return Err(CliError::Parameter(format!("size '{s}' has a zero dimension")));
    }
    Ok((r, c))
}

fn run_cell(cfg: &BenchConfig, (rows, cols): (usize, usize), seed: u64) -> Vec<BenchRow> {
    let row = |algorithm: Algorithm| BenchRow {
        algorithm: algorithm.name(),
        rows,
        cols,
        seed,
        rank: None,
        seconds: None,
        err_frob: None,
        rel_err_frob: None,
        error: None,
    };
    let a: DenseMatrix = match cfg.kind.generate(rows, cols, seed) {
        Ok(a) => a,
        Err(e) => {
            return cfg.algorithms.iter().map(|&algo| BenchRow { error: Some(e.to_string()), ..row(algo) }).collect();
        }
    };
    let norm = a.frob_norm();
    let params = Params { seed, ..cfg.params };
    cfg.algorithms
        .iter()
        .map(|&algo| match factorize(algo, &a, &params) {
            Ok(run) => {
                let err = a.sub(&run.approx).frob_norm();
                BenchRow {
                    rank: Some(run.rank),
                    seconds: Some(run.seconds),
                    err_frob: Some(err),
                    rel_err_frob: Some(if norm > 0.0 { err / norm } else { 0.0 }),
                    ..row(algo)
                }
            }
            Err(e) => BenchRow { error: Some(e.to_string()), ..row(algo) },
        })
        .collect()
}

/// Runs every (size, seed) cell, spreading cells over `cfg.threads` worker
/// threads. Rows come back in (size, seed, algorithm) order regardless of
/// scheduling, and every run draws only from its own seed.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.algorithms.is_empty() {
        return Err(CliError::Parameter("algorithm list is empty".into()));
    }
    if cfg.sizes.is_empty() || cfg.seeds.is_empty() {
        return Err(CliError::Parameter("size and seed lists must be nonempty".into()));
    }
    let cells: Vec<((usize, usize), u64)> =
        cfg.sizes.iter().flat_map(|&size| cfg.seeds.iter().map(move |&seed| (size, seed))).collect();
    let results: Vec<Mutex<Vec<BenchRow>>> = cells.iter().map(|_| Mutex::new(Vec::new())).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..cfg.threads.clamp(1, cells.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(size, seed)) = cells.get(i) else { break };
                *results[i].lock().unwrap() = run_cell(cfg, size, seed);
            });
        }
    });
    let runs = results.into_iter().flat_map(|m| m.into_inner().unwrap()).collect();
    Ok(BenchReport { schema: SCHEMA, kind: cfg.kind.to_string(), threads: cfg.threads, runs })
}
