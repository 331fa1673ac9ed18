//! Command-line front end for `randfact-core`: matrix I/O, test-matrix
//! generation, factorization runs and JSON reports.

pub mod bench;
pub mod error;
pub mod io;
pub mod kind;
pub mod run;

use std::path::Path;

use bench::{run_bench, BenchConfig, BenchReport};
pub use error::{CliError, Result};
use kind::MatrixKind;
use run::{factorize, report, Algorithm, Params, RunReport};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "RANDFACT_THREADS";

/// Worker-thread budget: one in deterministic mode, otherwise the value of
/// [`THREADS_ENV`] or the available parallelism.
pub fn thread_budget(deterministic: bool, env: Option<&str>) -> Result<usize> {
    if deterministic {
        return Ok(1);
    }
    match env {
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::Parameter(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

/// `randfact gen`: writes a generated matrix in Matrix Market array format.
pub fn cmd_gen(kind: &str, rows: usize, cols: usize, seed: u64, out: &Path) -> Result<()> {
    let a = MatrixKind::parse(kind)?.generate(rows, cols, seed)?;
    io::write_matrix_market(out, &a)
}

/// `randfact factorize`: runs one algorithm on a matrix file.
pub fn cmd_factorize(algo: &str, input: &Path, params: &Params, deterministic: bool) -> Result<RunReport> {
    let algo: Algorithm = algo.parse()?;
    let a = io::read_matrix(input)?;
    let run = factorize(algo, &a, params)?;
    report(algo, &a, &run, &input.display().to_string(), deterministic)
}

/// `randfact bench`: runs the sweep and writes the table atomically. No file
/// is written when the configuration is rejected.
pub fn cmd_bench(cfg: &BenchConfig, out: &Path) -> Result<BenchReport> {
    let table = run_bench(cfg)?;
    io::write_atomic(out, to_json(&table).as_bytes())?;
    Ok(table)
}
