use std::ops::Range;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Access counters for a [`MatrixStream`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StreamTelemetry {
    /// Completed traversals.
    pub passes: usize,
    /// Column blocks handed out.
    pub blocks: usize,
    /// Matrix entries handed out.
    pub entries: usize,
    /// Rejected attempts to traverse again.
    pub violations: usize,
}

/// One-shot iterator over the column blocks of an m×n matrix. A second
/// traversal is refused with [`Error::SinglePassViolation`].
pub struct MatrixStream<'a> {
    rows: usize,
    cols: usize,
    block: usize,
    source: Box<dyn FnMut(Range<usize>) -> DenseMatrix + 'a>,
    telemetry: StreamTelemetry,
}

impl<'a> MatrixStream<'a> {
    /// Streams the columns of `a` in blocks of `block` columns.
    pub fn from_matrix(a: &'a DenseMatrix, block: usize) -> Self {
        Self::from_fn(a.rows(), a.cols(), block, move |cols| a.columns(cols))
    }

    /// Streams blocks produced on demand by `source`, which receives the
    /// column range and must return an m×|range| matrix.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        block: usize,
        source: impl FnMut(Range<usize>) -> DenseMatrix + 'a,
    ) -> Self {
        Self { rows, cols, block: block.max(1), source: Box::new(source), telemetry: StreamTelemetry::default() }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn telemetry(&self) -> StreamTelemetry {
        self.telemetry
    }

    /// Visits every column block once, in order, as `visit(first_col, block)`.
    pub fn traverse(&mut self, mut visit: impl FnMut(usize, &DenseMatrix)) -> Result<()> {
        if self.telemetry.passes > 0 {
            self.telemetry.violations += 1;
            return Err(Error::SinglePassViolation);
        }
        let mut c0 = 0;
        while c0 < self.cols {
            let c1 = (c0 + self.block).min(self.cols);
            let blk = (self.source)(c0..c1);
            if blk.shape() != (self.rows, c1 - c0) {
                return Err(Error::shape(format!("stream block for columns {c0}..{c1} has shape {:?}", blk.shape())));
            }
            self.telemetry.blocks += 1;
            self.telemetry.entries += blk.rows() * blk.cols();
            visit(c0, &blk);
            c0 = c1;
        }
        self.telemetry.passes += 1;
        Ok(())
    }
}
