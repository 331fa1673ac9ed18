//! Test-matrix family names accepted by `gen` and `bench`.

use std::fmt;

use randfact_core::diagnostics::{test_matrix, Spectrum, TestMatrixKind, KAHAN_THETA};
use randfact_core::sketch::gaussian;
use randfact_core::DenseMatrix;

use crate::error::{CliError, Result};

/// A generator family. Names are case-insensitive and ignore `-` and `_`;
/// arguments follow in parentheses or after a colon, comma-separated:
/// `fast-decay(0.5)`, `FlatTail:10,0.1`, `ExactRank(5)`, `psd-flat-tail`,
/// `kahan(1.2)`, `gaussian`.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixKind {
    Gaussian,
    Test(TestMatrixKind),
}

impl MatrixKind {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = match spec.find(['(', ':']) {
            Some(pos) => {
                let rest = &spec[pos + 1..];
                let rest = if spec[pos..].starts_with('(') {
                    rest.strip_suffix(')')
                        .ok_or_else(|| CliError::Parse(format!("unbalanced parentheses in '{spec}'")))?
                } else {
                    rest
                };
                (&spec[..pos], rest)
            }
            None => (spec, ""),
        };
        let args: Vec<f64> = args
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| CliError::Parse(format!("bad argument '{t}' in matrix kind '{spec}'"))))
            .collect::<Result<_>>()?;
        let norm: String = name.chars().filter(|c| *c != '-' && *c != '_').collect::<String>().to_ascii_lowercase();
        let (psd, base) = match norm.strip_prefix("psd") {
            Some(b) => (true, b),
            None => (false, norm.as_str()),
        };
        let arity = |max: usize| {
            if args.len() > max {
                Err(CliError::Parse(format!("'{name}' takes at most {max} argument(s), got {}", args.len())))
            } else {
                Ok(())
            }
        };
        let count = |x: f64, what: &str| {
            if x >= 1.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(CliError::Parameter(format!("{what} must be a positive integer, got {x}")))
            }
        };
        let spectrum = match base {
            "gaussian" if !psd => {
                arity(0)?;
                return Ok(MatrixKind::Gaussian);
            }
            "kahan" if !psd => {
                arity(1)?;
                return Ok(MatrixKind::Test(TestMatrixKind::Kahan {
                    theta: args.first().copied().unwrap_or(KAHAN_THETA),
                }));
            }
            "fastdecay" => {
                arity(1)?;
                Spectrum::FastDecay { beta: args.first().copied().unwrap_or(0.5) }
            }
            "flattail" => {
                arity(2)?;
                let k = count(args.first().copied().unwrap_or(10.0), "flat-tail k")?;
                Spectrum::FlatTail { k, tail: args.get(1).copied().unwrap_or(0.1) }
            }
            "exactrank" => {
                arity(1)?;
                Spectrum::ExactRank { k: count(args.first().copied().unwrap_or(5.0), "rank")? }
            }
            _ => return Err(CliError::Parse(format!("unknown matrix kind '{name}'"))),
        };
        Ok(MatrixKind::Test(if psd { TestMatrixKind::Psd(spectrum) } else { TestMatrixKind::Planted(spectrum) }))
    }

    pub fn generate(&self, rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix> {
        if rows == 0 || cols == 0 {
            return Err(CliError::Parameter(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        match self {
            MatrixKind::Gaussian => Ok(gaussian(seed, rows, cols)),
            MatrixKind::Test(kind) => Ok(test_matrix(kind, rows, cols, seed)?),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spectrum = |f: &mut fmt::Formatter<'_>, s: &Spectrum| match s {
            Spectrum::FastDecay { beta } => write!(f, "fast-decay({beta})"),
            Spectrum::FlatTail { k, tail } => write!(f, "flat-tail({k},{tail})"),
            Spectrum::ExactRank { k } => write!(f, "exact-rank({k})"),
            Spectrum::Explicit(v) => write!(f, "explicit({} values)", v.len()),
        };
        match self {
            MatrixKind::Gaussian => write!(f, "gaussian"),
            MatrixKind::Test(TestMatrixKind::Kahan { theta }) => write!(f, "kahan({theta})"),
            MatrixKind::Test(TestMatrixKind::Planted(s)) => spectrum(f, s),
            MatrixKind::Test(TestMatrixKind::Psd(s)) => {
                write!(f, "psd-")?;
                spectrum(f, s)
            }
        }
    }
}
