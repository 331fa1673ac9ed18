//! Randomized matrix factorizations on dense real matrices: range finders,
//! randomized SVD, single-pass and Nyström eigendecompositions, interpolative
//! and CUR decompositions, adaptive rank determination, and randomized full
//! factorizations (blocked pivoted QR and UTV). A self-contained dense kernel
//! supplies QR, SVD and symmetric eigensolvers; a diagnostics layer provides
//! test matrices, error bounds and probabilistic norm estimates.

// `!(x > t)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dense;
pub mod diagnostics;
pub mod error;
pub mod fullfact;
pub mod lowrank;
pub mod rangefinder;
pub mod sketch;

pub use dense::{DenseMatrix, PivotedQr, SvdFactors};
pub use error::{Error, Result, Warning};
pub use fullfact::UtvFactors;
pub use lowrank::{CurFactors, IdFactors, LowRankEvd, SinglePassSvd};
pub use rangefinder::{RangeBasis, RangeConfig};
pub use sketch::{SketchKind, SketchOperator};
