//! Householder reflectors, their compact-WY aggregation, and the QR
//! factorizations built on them.

use std::ops::Range;

use super::matrix::{axpy, dot, norm2, DenseMatrix};

/// Panel width used by the blocked QR.
const QR_BLOCK: usize = 32;

/// Computes a reflector `H = I − τ v vᵀ`, `v[0] = 1`, with `H x = β e₁` and
/// `β ≥ 0`. On return `x[0] = β` and `x[1..]` holds `v[1..]`.
pub(crate) fn make_reflector(x: &mut [f64]) -> f64 {
    let Some((&mut x0, tail)) = x.split_first_mut() else {
        return 0.0;
    };
    let s = norm2(tail);
    if s == 0.0 {
        if x0 >= 0.0 {
            return 0.0;
        }
        x[0] = -x0;
        return 2.0;
    }
    let mu = x0.hypot(s);
    let v0 = if x0 <= 0.0 { x0 - mu } else { -(s / (x0 + mu)) * s };
    let ratio = s / v0;
    let tau = 2.0 / (1.0 + ratio * ratio);
    let inv = 1.0 / v0;
    for t in tail.iter_mut() {
        *t *= inv;
    }
    x[0] = mu;
    tau
}

/// Applies `I − τ v vᵀ` (with `v = [1; v_tail]`) to the slice `c`.
#[inline]
pub(crate) fn apply_reflector(v_tail: &[f64], tau: f64, c: &mut [f64]) {
    if tau == 0.0 {
        return;
    }
    let (c0, rest) = c.split_first_mut().expect("empty column");
    let w = tau * (*c0 + dot(v_tail, rest));
    *c0 -= w;
    axpy(-w, v_tail, rest);
}

/// Product of consecutive reflectors in compact-WY form `I − V T Vᵀ`,
/// acting on rows `row0..row0 + V.rows()` of its targets.
#[derive(Clone, Debug)]
pub(crate) struct BlockReflector {
    row0: usize,
    v: DenseMatrix,
    t: DenseMatrix,
}

impl BlockReflector {
    /// Collects the reflectors stored below the diagonal of `w`, starting at
    /// diagonal position `(d, d)` and spanning `taus.len()` columns.
    pub(crate) fn from_factored(w: &DenseMatrix, d: usize, col0: usize, taus: &[f64]) -> Self {
        let b = taus.len();
        let len = w.rows() - d;
        let mut v = DenseMatrix::zeros(len, b);
        for j in 0..b {
            let src = w.col(col0 + j);
            let dst = v.col_mut(j);
            dst[j] = 1.0;
            dst[j + 1..].copy_from_slice(&src[d + j + 1..]);
        }
        let mut t = DenseMatrix::zeros(b, b);
        for i in 0..b {
            t[(i, i)] = taus[i];
            if i == 0 || taus[i] == 0.0 {
                continue;
            }
            let z: Vec<f64> = (0..i).map(|j| dot(v.col(j), v.col(i))).collect();
            for r in 0..i {
                let s: f64 = (r..i).map(|c| t[(r, c)] * z[c]).sum();
                t[(r, i)] = -taus[i] * s;
            }
        }
        Self { row0: d, v, t }
    }

    /// The same reflector acting on rows (or columns) starting `offset`
    /// further along.
    pub(crate) fn shifted(mut self, offset: usize) -> Self {
        self.row0 += offset;
        self
    }

    pub(crate) fn width(&self) -> usize {
        self.t.rows()
    }

    /// `C[rows, cols] ← op(H) C[rows, cols]`, `op(H) = Hᵀ` when `transpose`.
    fn apply_left(&self, c: &mut DenseMatrix, cols: Range<usize>, transpose: bool) {
        if cols.is_empty() || self.width() == 0 {
            return;
        }
        let rows = self.row0..self.row0 + self.v.rows();
        let sub = c.submatrix(rows.clone(), cols.clone());
        let w = self.v.tr_matmul(&sub);
        let w = if transpose { self.t.tr_matmul(&w) } else { self.t.matmul(&w) };
        let mut sub = sub;
        sub.sub_product_assign(&self.v, &w);
        c.set_submatrix(rows.start, cols.start, &sub);
    }

    /// `C ← Hᵀ C` on the rows this block acts on.
    pub(crate) fn apply_qt(&self, c: &mut DenseMatrix, cols: Range<usize>) {
        self.apply_left(c, cols, true);
    }

    /// `C ← H C` on the rows this block acts on.
    pub(crate) fn apply_q(&self, c: &mut DenseMatrix, cols: Range<usize>) {
        self.apply_left(c, cols, false);
    }

    /// `C[rows, ·] ← C[rows, ·] H`, acting on columns `row0..` of `C`.
    pub(crate) fn apply_right(&self, c: &mut DenseMatrix, rows: Range<usize>) {
        if rows.is_empty() || self.width() == 0 {
            return;
        }
        let cols = self.row0..self.row0 + self.v.rows();
        let mut sub = c.submatrix(rows.clone(), cols.clone());
        let cv = sub.matmul(&self.v);
        let cvt = cv.matmul(&self.t);
        sub.sub_product_assign(&cvt, &self.v.transpose());
        c.set_submatrix(rows.start, cols.start, &sub);
    }
}

/// Unblocked Householder factorization of the panel `w[d.., col0..col0+width]`
/// whose first reflector sits at diagonal entry `(d, col0)`. Returns the taus;
/// the panel's own columns are fully updated.
pub(crate) fn factor_panel(w: &mut DenseMatrix, d: usize, col0: usize, width: usize) -> Vec<f64> {
    let m = w.rows();
    let mut taus = Vec::with_capacity(width);
    for jj in 0..width {
        let j = col0 + jj;
        let r = d + jj;
        if r >= m {
            break;
        }
        let tau = make_reflector(&mut w.col_mut(j)[r..]);
        taus.push(tau);
        if tau != 0.0 {
            let v_tail = w.col(j)[r + 1..].to_vec();
            for c in j + 1..col0 + width {
                apply_reflector(&v_tail, tau, &mut w.col_mut(c)[r..]);
            }
        }
    }
    taus
}

/// Forms the leading `ncols` columns of `H₁ H₂ ⋯` from block reflectors given
/// in application order.
pub(crate) fn explicit_q(blocks: &[BlockReflector], m: usize, ncols: usize) -> DenseMatrix {
    let mut q = DenseMatrix::eye(m, ncols);
    for b in blocks.iter().rev() {
        b.apply_q(&mut q, b.row0.min(ncols)..ncols);
    }
    q
}

/// Groups the reflectors stored in the factored matrix `w` (diagonal starting
/// at 0) into blocks of `QR_BLOCK`.
fn blocks_from_factored(w: &DenseMatrix, taus: &[f64]) -> Vec<BlockReflector> {
    taus.chunks(QR_BLOCK)
        .enumerate()
        .map(|(i, chunk)| {
            let d = i * QR_BLOCK;
            BlockReflector::from_factored(w, d, d, chunk)
        })
        .collect()
}

fn upper_rows(w: &DenseMatrix, r: usize) -> DenseMatrix {
    DenseMatrix::from_fn(r, w.cols(), |i, j| if i <= j { w[(i, j)] } else { 0.0 })
}

/// Thin Householder QR: `A = Q R` with `Q` m×min(m,n) orthonormal and `R`
/// upper triangular with nonnegative diagonal. Blocked, with trailing updates
/// applied in compact-WY form.
pub fn householder_qr(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let (m, n) = a.shape();
    let r = m.min(n);
    let mut w = a.clone();
    let mut taus = Vec::with_capacity(r);
    let mut j0 = 0;
    while j0 < r {
        let jb = QR_BLOCK.min(r - j0);
        let block_taus = factor_panel(&mut w, j0, j0, jb);
        if j0 + jb < n {
            let block = BlockReflector::from_factored(&w, j0, j0, &block_taus);
            block.apply_qt(&mut w, j0 + jb..n);
        }
        taus.extend(block_taus);
        j0 += jb;
    }
    let q = explicit_q(&blocks_from_factored(&w, &taus), m, r);
    (q, upper_rows(&w, r))
}

/// When to stop a column-pivoted QR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CpqrStop {
    /// Stop after this many pivots.
    Rank(usize),
    /// Stop once the Frobenius norm of the trailing block is at most this.
    Tolerance(f64),
    /// Run to `min(m, n)` steps.
    Full,
}

/// Output of a (possibly partial) column-pivoted QR, `A(:, perm) ≈ Q R`.
#[derive(Debug, Clone)]
pub struct PivotedQr {
    /// m×r with orthonormal columns.
    pub q: DenseMatrix,
    /// r×n; the leading r×r block is upper triangular, the remainder is `S₁₂`.
    pub r: DenseMatrix,
    /// Pivot order (0-based column indices of `A`).
    pub perm: Vec<usize>,
    pub stopped_rank: usize,
    /// Frobenius norm of the trailing block `S₂₂` left when the process stopped.
    pub trailing_frob: f64,
}

impl PivotedQr {
    /// `Q R` with columns returned to the original order of `A`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let qr = self.q.matmul(&self.r);
        let mut out = DenseMatrix::zeros(qr.rows(), qr.cols());
        for (k, &j) in self.perm.iter().enumerate() {
            out.col_mut(j).copy_from_slice(qr.col(k));
        }
        out
    }
}

/// Column-pivoted Householder QR with greedy largest-remaining-column
/// pivoting and downdated column norms.
///
/// Independently of `stop`, the factorization halts once every remaining
/// column norm falls below `1e-14·‖A‖_F`.
pub fn cpqr(a: &DenseMatrix, stop: CpqrStop) -> PivotedQr {
    cpqr_with_floor(a, stop, 1e-14)
}

/// [`cpqr`] with the relative halting floor as a parameter; a zero floor
/// only stops on exactly zero remainders.
pub(crate) fn cpqr_with_floor(a: &DenseMatrix, stop: CpqrStop, floor: f64) -> PivotedQr {
    let (m, n) = a.shape();
    let kmax = match stop {
        CpqrStop::Rank(k) => k.min(m.min(n)),
        _ => m.min(n),
    };
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut vn1: Vec<f64> = (0..n).map(|j| norm2(w.col(j))).collect();
    let mut vn2 = vn1.clone();
    let halt = floor * a.frob_norm();
    let tol3z = f64::EPSILON.sqrt();
    let mut taus = Vec::with_capacity(kmax);

    for j in 0..kmax {
        if let CpqrStop::Tolerance(eps) = stop {
            let est = norm2(&vn1[j..]);
            if est <= eps {
                // Confirm with exact norms before stopping.
                for i in j..n {
                    vn1[i] = norm2(&w.col(i)[j..]);
                    vn2[i] = vn1[i];
                }
                if norm2(&vn1[j..]) <= eps {
                    break;
                }
            }
        }
        let (pvt, &best) =
            vn1[j..].iter().enumerate().fold(
                (0, &f64::NEG_INFINITY),
                |acc, (i, v)| {
                    if *v > *acc.1 {
                        (i, v)
                    } else {
                        acc
                    }
                },
            );
        if best <= halt {
            break;
        }
        let pvt = j + pvt;
        if pvt != j {
            w.swap_columns(j, pvt);
            perm.swap(j, pvt);
            vn1.swap(j, pvt);
            vn2.swap(j, pvt);
        }
        let tau = make_reflector(&mut w.col_mut(j)[j..]);
        taus.push(tau);
        let v_tail = w.col(j)[j + 1..].to_vec();
        for i in j + 1..n {
            apply_reflector(&v_tail, tau, &mut w.col_mut(i)[j..]);
            if vn1[i] != 0.0 {
                let ratio = w[(j, i)].abs() / vn1[i];
                let temp = (1.0 - ratio * ratio).max(0.0);
                let temp2 = temp * (vn1[i] / vn2[i]).powi(2);
                if temp2 <= tol3z {
                    vn1[i] = if j + 1 < m { norm2(&w.col(i)[j + 1..]) } else { 0.0 };
                    vn2[i] = vn1[i];
                } else {
                    vn1[i] *= temp.sqrt();
                }
            }
        }
    }

    let r = taus.len();
    let trailing_frob = {
        let mut ss = 0.0;
        for j in r..n {
            let t = norm2(&w.col(j)[r..]);
            ss += t * t;
        }
        ss.sqrt()
    };
    let q = explicit_q(&blocks_from_factored(&w, &taus), m, r);
    PivotedQr { q, r: upper_rows(&w, r), perm, stopped_rank: r, trailing_frob }
}

/// Orthonormal basis for the column space of `x` by unpivoted Gram–Schmidt
/// with reorthogonalization. Columns whose residual falls below
/// `1e-13·‖X‖_F` are dropped, so the result may have fewer columns than `x`.
pub fn orth(x: &DenseMatrix) -> DenseMatrix {
    let thresh = 1e-13 * x.frob_norm();
    let mut q = DenseMatrix::zeros(x.rows(), 0);
    if thresh == 0.0 {
        return q;
    }
    for j in 0..x.cols() {
        if let Some(v) = orthogonalize_against(&q, x.col(j), thresh) {
            q.push_column(&v);
        }
    }
    q
}

/// Removes the `span(q)` component from `x` (two or more Gram–Schmidt passes)
/// and returns the normalized remainder, or `None` when its norm is at most
/// `thresh`.
pub(crate) fn orthogonalize_against(q: &DenseMatrix, x: &[f64], thresh: f64) -> Option<Vec<f64>> {
    let mut v = x.to_vec();
    let mut prev = norm2(&v);
    for pass in 0..3 {
        for k in 0..q.cols() {
            let c = dot(q.col(k), &v);
            axpy(-c, q.col(k), &mut v);
        }
        let now = norm2(&v);
        let settled = now > 0.7 * prev;
        prev = now;
        if pass >= 1 && settled {
            break;
        }
    }
    if !(prev > thresh) {
        return None;
    }
    let inv = 1.0 / prev;
    v.iter_mut().for_each(|e| *e *= inv);
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_matrix(m: usize, n: usize, seed: u64) -> DenseMatrix {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        DenseMatrix::from_fn(m, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
    }

    #[test]
    fn reflector_maps_to_nonnegative_multiple_of_e1() {
        for x0 in [3.0, -3.0, 0.0] {
            let x = vec![x0, 1.0, -2.0];
            let mut y = x.clone();
            let tau = make_reflector(&mut y);
            let beta = y[0];
            let mut z = x.clone();
            apply_reflector(&y[1..], tau, &mut z);
            assert!((z[0] - beta).abs() < 1e-14 && beta > 0.0);
            assert!(z[1].abs() < 1e-14 && z[2].abs() < 1e-14);
        }
        let mut neg = vec![-2.0, 0.0];
        let tau = make_reflector(&mut neg);
        assert_eq!((tau, neg[0]), (2.0, 2.0));
    }

    #[test]
    fn identity_and_pythagorean_column() {
        let (q, r) = householder_qr(&DenseMatrix::identity(3));
        assert_eq!(q, DenseMatrix::identity(3));
        assert_eq!(r, DenseMatrix::identity(3));

        let (q, r) = householder_qr(&DenseMatrix::from_rows(&[[3.0], [4.0]]));
        assert!((q[(0, 0)] - 0.6).abs() < 1e-15 && (q[(1, 0)] - 0.8).abs() < 1e-15);
        assert!((r[(0, 0)] - 5.0).abs() < 1e-15);
    }

    #[test]
    fn blocked_qr_reconstructs_wide_and_tall() {
        for (m, n) in [(6, 4), (4, 6), (80, 70), (70, 90)] {
            let a = lcg_matrix(m, n, (m * n) as u64);
            let (q, r) = householder_qr(&a);
            assert!(q.orthonormality_defect() < 1e-12);
            assert!(q.matmul(&r).sub(&a).frob_norm() < 1e-12 * a.frob_norm());
            for i in 0..r.rows() {
                assert!(r[(i, i)] >= 0.0);
                for j in 0..i {
                    assert_eq!(r[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn block_reflector_right_application_matches_left() {
        let a = lcg_matrix(9, 4, 3);
        let mut w = a.clone();
        let taus = factor_panel(&mut w, 0, 0, 4);
        let h = BlockReflector::from_factored(&w, 0, 0, &taus);
        let mut left = DenseMatrix::identity(9);
        h.apply_q(&mut left, 0..9);
        let mut right = DenseMatrix::identity(9);
        h.apply_right(&mut right, 0..9);
        assert!(left.sub(&right).max_abs() < 1e-14);
    }

    #[test]
    fn cpqr_diag_and_exact_rank() {
        let f = cpqr(&DenseMatrix::from_diag(&[1.0, 2.0, 3.0]), CpqrStop::Full);
        assert_eq!(f.perm, vec![2, 1, 0]);

        let u = lcg_matrix(10, 2, 5);
        let v = lcg_matrix(2, 8, 6);
        let f = cpqr(&u.matmul(&v), CpqrStop::Tolerance(1e-12));
        assert_eq!(f.stopped_rank, 2);
    }

    #[test]
    fn cpqr_full_is_valid_with_monotone_diagonal() {
        let a = lcg_matrix(30, 20, 11);
        let f = cpqr(&a, CpqrStop::Full);
        assert!(f.q.orthonormality_defect() < 1e-12);
        assert!(f.reconstruct().sub(&a).frob_norm() <= 1e-12 * a.frob_norm());
        let d = f.r.diagonal();
        assert!(d.windows(2).all(|w| w[0].abs() >= w[1].abs()));
        assert!(d.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn orth_edge_cases() {
        let x = DenseMatrix::from_rows(&[[2.0, 0.0], [0.0, 0.0], [0.0, 3.0]]);
        let q = orth(&x);
        assert_eq!(q.cols(), 2);
        assert!((q[(0, 0)].abs() - 1.0).abs() < 1e-15 && (q[(2, 1)].abs() - 1.0).abs() < 1e-15);

        assert_eq!(orth(&DenseMatrix::zeros(5, 3)).cols(), 0);

        let v = lcg_matrix(7, 1, 9);
        assert_eq!(orth(&v.hcat(&v.scale(2.0))).cols(), 1);
    }
}
