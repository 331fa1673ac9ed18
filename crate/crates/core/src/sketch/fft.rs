//! Unitary discrete Fourier transform: iterative radix-2 FFT for power-of-two
//! lengths, direct evaluation otherwise.

use std::f64::consts::TAU;

use num_complex::Complex64;

/// Entry `F(p, q) = n^{-1/2} e^{-2πi pq/n}` of the unitary DFT matrix
/// (0-based indices).
pub fn dft_entry(n: usize, p: usize, q: usize) -> Complex64 {
    let phase = -TAU * ((p * q) % n) as f64 / n as f64;
    Complex64::from_polar(1.0 / (n as f64).sqrt(), phase)
}

/// Precomputed radix-2 transform of a fixed power-of-two length.
pub(crate) struct Radix2 {
    n: usize,
    twiddles: Vec<Complex64>,
    rev: Vec<usize>,
}

impl Radix2 {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n.is_power_of_two());
        let bits = n.trailing_zeros();
        let rev = (0..n).map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) }).collect();
        let twiddles = (0..n / 2).map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / n as f64)).collect();
        Self { n, twiddles, rev }
    }

    /// In-place unnormalized forward transform `X_k = Σ_j x_j e^{-2πi jk/n}`.
    pub(crate) fn forward(&self, x: &mut [Complex64]) {
        let n = self.n;
        debug_assert_eq!(x.len(), n);
        for i in 0..n {
            let j = self.rev[i];
            if i < j {
                x.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = x[start + k];
                    let b = x[start + k + half] * w;
                    x[start + k] = a + b;
                    x[start + k + half] = a - b;
                }
            }
            len *= 2;
        }
    }
}

/// `F x` for the unitary DFT matrix `F`.
pub fn fft_unitary(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let scale = 1.0 / (n as f64).sqrt();
    if n.is_power_of_two() {
        let mut y = x.to_vec();
        Radix2::new(n).forward(&mut y);
        y.iter_mut().for_each(|v| *v *= scale);
        y
    } else {
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| v * Complex64::from_polar(1.0, -TAU * ((j * k) % n) as f64 / n as f64))
                    .sum::<Complex64>()
                    * scale
            })
            .collect()
    }
}

/// `F* x`, the inverse of [`fft_unitary`].
pub fn ifft_unitary(x: &[Complex64]) -> Vec<Complex64> {
    let conj: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
    fft_unitary(&conj).into_iter().map(|v| v.conj()).collect()
}
