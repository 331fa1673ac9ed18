use crate::dense::householder::{factor_panel, BlockReflector};
use crate::dense::{svd, DenseMatrix};
use crate::error::{Error, Result};
use crate::sketch::{derive_seed, gaussian};

/// `A = U T Vᵀ` with orthogonal `U` (m×m), `V` (n×n). `T` is upper
/// triangular when `m ≥ n`; wide inputs are factored through `Aᵀ`, giving a
/// lower-triangular `T`.
#[derive(Debug, Clone)]
pub struct UtvFactors {
    pub u: DenseMatrix,
    pub t: DenseMatrix,
    pub v: DenseMatrix,
    pub lower: bool,
}

impl UtvFactors {
    pub fn reconstruct(&self) -> DenseMatrix {
        self.u.matmul(&self.t).matmul_tr(&self.v)
    }

    /// Diagonal of `T`, the singular-value estimates.
    pub fn diagonal(&self) -> Vec<f64> {
        self.t.diagonal()
    }
}

/// Blocked randomized UTV factorization with block size `b` and `q` steps
/// of power iteration per block. Step `i` draws its sketch from
/// `derive_seed(seed, i)`.
pub fn randutv(a: &DenseMatrix, b: usize, q: usize, seed: u64) -> Result<UtvFactors> {
    if b == 0 {
        return Err(Error::param("block size must be at least 1"));
    }
    let (m, n) = a.shape();
    if m < n {
        let f = randutv(&a.transpose(), b, q, seed)?;
        return Ok(UtvFactors { u: f.v, t: f.t.transpose(), v: f.u, lower: true });
    }
    let mut t = a.clone();
    let mut u = DenseMatrix::identity(m);
    let mut v = DenseMatrix::identity(n);
    let mut c0 = 0;
    let mut step = 0u64;
    while c0 < n {
        let rest = n - c0;
        if rest > b {
            // Right transform: Householder basis of the sketched row space.
            let trailing = t.submatrix(c0..m, c0..n);
            let g = gaussian(derive_seed(seed, step), m - c0, b);
            let mut y = rescaled(trailing.tr_matmul(&g));
            for _ in 0..q {
                y = rescaled(trailing.tr_matmul(&trailing.matmul(&y)));
            }
            let taus = factor_panel(&mut y, 0, 0, b);
            let hv = BlockReflector::from_factored(&y, 0, 0, &taus).shifted(c0);
            hv.apply_right(&mut t, 0..m);
            hv.apply_right(&mut v, 0..n);
            // Left transform: b Householder steps on the leading block column.
            let hu = left_panel(&mut t, c0, b);
            hu.apply_right(&mut u, 0..m);
            diagonalize_block(&mut t, &mut u, &mut v, c0, b)?;
        } else {
            let hu = left_panel(&mut t, c0, rest);
            hu.apply_right(&mut u, 0..m);
            diagonalize_block(&mut t, &mut u, &mut v, c0, rest)?;
        }
        c0 += b.min(rest);
        step += 1;
    }
    Ok(UtvFactors { u, t, v, lower: false })
}

/// Scales `y` to unit max-norm; the span is all that matters and repeated
/// power steps would otherwise underflow on small trailing blocks.
fn rescaled(y: DenseMatrix) -> DenseMatrix {
    let s = y.max_abs();
    if s > 0.0 && s.is_finite() {
        y.scale(1.0 / s)
    } else {
        y
    }
}

/// Householder-triangularizes columns `c0..c0 + w` of `t` from row `c0`
/// down, applies the reflectors to the columns on the right, and clears
/// the eliminated entries. Returns the block reflector.
fn left_panel(t: &mut DenseMatrix, c0: usize, w: usize) -> BlockReflector {
    let n = t.cols();
    let taus = factor_panel(t, c0, c0, w);
    let hu = BlockReflector::from_factored(t, c0, c0, &taus);
    hu.apply_qt(t, c0 + w..n);
    for j in c0..c0 + w {
        t.col_mut(j)[j + 1..].iter_mut().for_each(|x| *x = 0.0);
    }
    hu
}

/// Replaces the upper-triangular diagonal block `T(c0.., c0..)` of width `w`
/// by its singular values and folds the rotations into the neighbouring
/// blocks of `T` and into `U`, `V`.
fn diagonalize_block(t: &mut DenseMatrix, u: &mut DenseMatrix, v: &mut DenseMatrix, c0: usize, w: usize) -> Result<()> {
    let (m, n) = t.shape();
    let c1 = c0 + w;
    let f = svd(&t.submatrix(c0..c1, c0..c1))?;
    t.set_submatrix(c0, c0, &DenseMatrix::from_diag(&f.s));
    if c1 < n {
        let right = f.u.tr_matmul(&t.submatrix(c0..c1, c1..n));
        t.set_submatrix(c0, c1, &right);
    }
    if c0 > 0 {
        let above = t.submatrix(0..c0, c0..c1).matmul(&f.v);
        t.set_submatrix(0, c0, &above);
    }
    let uc = u.submatrix(0..m, c0..c1).matmul(&f.u);
    u.set_submatrix(0, c0, &uc);
    let vc = v.submatrix(0..n, c0..c1).matmul(&f.v);
    v.set_submatrix(0, c0, &vc);
    Ok(())
}
