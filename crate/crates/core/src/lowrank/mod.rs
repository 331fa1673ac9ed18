//! Stage-B factorizations: randomized SVD, single-pass EVD/SVD, Nyström,
//! interpolative decompositions and CUR.

mod id;
mod nystrom;
mod rsvd;
mod single_pass;
mod stream;

pub use id::{
    fast_randomized_id, id_deterministic, randomized_cur, randomized_cur_with, randomized_id, randomized_id_with,
    CurFactors, IdFactors, IdSide, CUR_CONDITION_WARN,
};
pub use nystrom::{nystrom_evd, nystrom_evd_with};
pub use rsvd::{rsvd, rsvd_with};
pub use single_pass::{
    single_pass_evd, single_pass_evd_with, single_pass_svd, single_pass_svd_with, SinglePassOptions, SinglePassSvd,
};
pub use stream::{MatrixStream, StreamTelemetry};

use crate::dense::DenseMatrix;
use crate::error::Warning;

/// Approximate eigenvalue decomposition `A ≈ U diag(λ) Uᵀ`.
#[derive(Debug, Clone)]
pub struct LowRankEvd {
    /// n×k with orthonormal columns.
    pub u: DenseMatrix,
    /// Eigenvalue estimates, ordered by nonincreasing magnitude.
    pub lambda: Vec<f64>,
    pub warnings: Vec<Warning>,
}

impl LowRankEvd {
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut ul = self.u.clone();
        for (j, &l) in self.lambda.iter().enumerate() {
            ul.col_mut(j).iter_mut().for_each(|x| *x *= l);
        }
        ul.matmul_tr(&self.u)
    }

    pub(crate) fn truncate(&mut self, k: usize) {
        let k = k.min(self.lambda.len());
        self.lambda.truncate(k);
        self.u.truncate_columns(k);
    }
}
