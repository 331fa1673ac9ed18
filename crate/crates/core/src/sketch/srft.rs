//! Subsampled random Fourier transform `Ω = D F S`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::fft::Radix2;
use super::{SketchRng, STREAM_SRFT};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// `A·Ω` for the SRFT `Ω = D F S` of width `ell`, returned as the real
/// m×2ℓ matrix `[Re(AΩ) | Im(AΩ)]`.
///
/// `D` holds n random unimodular phases, `F` is the unitary DFT and `S`
/// selects ℓ distinct columns (partial Fisher–Yates). The phases are drawn
/// first, then the selection, both from stream [`STREAM_SRFT`] of `seed`.
/// For power-of-two n each row costs `O(n log ℓ)`.
pub fn srft_sample(a: &DenseMatrix, ell: usize, seed: u64) -> Result<DenseMatrix> {
    let n = a.cols();
    if ell == 0 || ell > n {
        return Err(Error::param(format!("SRFT width must be in 1..={n}, got {ell}")));
    }
    let mut rng = SketchRng::new(seed, STREAM_SRFT);
    let phases: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(1.0, TAU * rng.uniform())).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    for t in 0..ell {
        let j = t + rng.below((n - t) as u64) as usize;
        idx.swap(t, j);
    }
    idx.truncate(ell);
    srft_apply(a, &phases, &idx)
}

/// `[Re(A D F S) | Im(A D F S)]` for explicitly given phases (the diagonal of
/// `D`) and selected DFT columns (0-based, the columns of `S`).
pub fn srft_apply(a: &DenseMatrix, phases: &[Complex64], cols: &[usize]) -> Result<DenseMatrix> {
    let (m, n) = a.shape();
    if phases.len() != n {
        return Err(Error::shape(format!("{} phases for {} columns", phases.len(), n)));
    }
    if let Some(&bad) = cols.iter().find(|&&c| c >= n) {
        return Err(Error::param(format!("selected column {bad} out of range 0..{n}")));
    }
    let ell = cols.len();
    let mut out = DenseMatrix::zeros(m, 2 * ell);
    if ell == 0 {
        return Ok(out);
    }
    let at = a.transpose();
    let scale = 1.0 / (n as f64).sqrt();
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let emit = |i: usize, t: usize, v: Complex64, out: &mut DenseMatrix| {
        out[(i, t)] = v.re * scale;
        out[(i, ell + t)] = v.im * scale;
    };

    if n.is_power_of_two() {
        // Split q = q1 + r·q2 with s = n/r the smallest power of two ≥ ℓ: length-s
        // FFTs over the r decimated subsequences, then an r-term sum per output.
        let s = ell.next_power_of_two().min(n);
        let r = n / s;
        let plan = Radix2::new(s);
        let outer: Vec<Complex64> = cols
            .iter()
            .flat_map(|&k| (0..r).map(move |q1| Complex64::from_polar(1.0, -TAU * ((q1 * k) % n) as f64 / n as f64)))
            .collect();
        let mut z = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..m {
            let row = at.col(i);
            for q1 in 0..r {
                let seg = &mut z[q1 * s..(q1 + 1) * s];
                for (q2, v) in seg.iter_mut().enumerate() {
                    let q = q1 + r * q2;
                    *v = phases[q] * row[q];
                }
                plan.forward(seg);
            }
            for (t, &k) in cols.iter().enumerate() {
                let w = &outer[t * r..(t + 1) * r];
                let k2 = k % s;
                let v: Complex64 = (0..r).map(|q1| w[q1] * z[q1 * s + k2]).sum();
                emit(i, t, v, &mut out);
            }
        }
    } else {
        let table: Vec<Complex64> = cols
            .iter()
            .flat_map(|&k| (0..n).map(move |q| Complex64::from_polar(1.0, -TAU * ((q * k) % n) as f64 / n as f64)))
            .collect();
        for i in 0..m {
            let row = at.col(i);
            for q in 0..n {
                x[q] = phases[q] * row[q];
            }
            for t in 0..ell {
                let w = &table[t * n..(t + 1) * n];
                let v: Complex64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
                emit(i, t, v, &mut out);
            }
        }
    }
    Ok(out)
}
