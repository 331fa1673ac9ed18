//! Dense linear-algebra kernels shared by every algorithm in the crate.

pub(crate) mod householder;
mod matrix;
mod solve;
mod svd;

pub use householder::{cpqr, householder_qr, orth, CpqrStop, PivotedQr};
pub use matrix::{axpy, dot, norm2, DenseMatrix};
pub use solve::{cholesky, condition_number, least_squares, pinv, solve_upper, solve_upper_right, PINV_RTOL};
pub use svd::{singular_values, svd, sym_eig, SvdFactors};
