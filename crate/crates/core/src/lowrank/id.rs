use crate::dense::{condition_number, cpqr, least_squares, orth, solve_upper, CpqrStop, DenseMatrix};
use crate::error::{Error, Result, Warning};
use crate::rangefinder::{power_range, RangeConfig};
use crate::sketch::{gaussian, srft_sample};

/// Condition number of `C` or `R` above which a CUR result carries a warning.
pub const CUR_CONDITION_WARN: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdSide {
    /// `A ≈ A(:, Js) Z`.
    Col,
    /// `A ≈ X A(Is, :)`.
    Row,
    /// `A ≈ X A(Is, Js) Z`.
    Double,
}

/// Interpolative decomposition. Which fields are present depends on `side`.
#[derive(Debug, Clone)]
pub struct IdFactors {
    pub side: IdSide,
    /// Skeleton columns (0-based).
    pub js: Option<Vec<usize>>,
    /// Skeleton rows (0-based).
    pub is: Option<Vec<usize>>,
    /// k×n column interpolation matrix, `Z(:, Js) = I`.
    pub z: Option<DenseMatrix>,
    /// m×k row interpolation matrix, `X(Is, :) = I`.
    pub x: Option<DenseMatrix>,
    /// `‖S₂₂‖_F` of the pivoted QR that chose the skeleton (deterministic IDs
    /// only; this equals the ID error).
    pub cpqr_residual: Option<f64>,
    pub warnings: Vec<Warning>,
}

impl IdFactors {
    pub fn rank(&self) -> usize {
        self.js.as_ref().or(self.is.as_ref()).map_or(0, Vec::len)
    }

    /// The approximation of `a` described by these factors.
    pub fn reconstruct(&self, a: &DenseMatrix) -> DenseMatrix {
        match self.side {
            IdSide::Col => a.select_columns(self.js.as_ref().unwrap()).matmul(self.z.as_ref().unwrap()),
            IdSide::Row => self.x.as_ref().unwrap().matmul(&a.select_rows(self.is.as_ref().unwrap())),
            IdSide::Double => {
                let skel = a.select_rows(self.is.as_ref().unwrap()).select_columns(self.js.as_ref().unwrap());
                self.x.as_ref().unwrap().matmul(&skel).matmul(self.z.as_ref().unwrap())
            }
        }
    }
}

struct ColumnId {
    js: Vec<usize>,
    z: DenseMatrix,
    residual: f64,
    warnings: Vec<Warning>,
}

/// Column ID from a rank-`k` partial pivoted QR: `T = S₁₁⁻¹ S₁₂`,
/// `Z(:, perm) = [I T]`.
fn id_col(a: &DenseMatrix, k: usize) -> Result<ColumnId> {
    let n = a.cols();
    if k == 0 || k > a.rows().min(n) {
        return Err(Error::param(format!("ID rank must be in 1..={}, got {k}", a.rows().min(n))));
    }
    let f = cpqr(a, CpqrStop::Rank(k));
    let r = f.stopped_rank;
    let mut warnings = Vec::new();
    if r < k {
        warnings.push(Warning::RankTruncated { requested: k, detected: r });
    }
    let s11 = f.r.submatrix(0..r, 0..r);
    let s12 = f.r.submatrix(0..r, r..n);
    let t = solve_upper(&s11, &s12)?;
    let mut z = DenseMatrix::zeros(r, n);
    for i in 0..r {
        z[(i, f.perm[i])] = 1.0;
    }
    for j in 0..n - r {
        z.col_mut(f.perm[r + j]).copy_from_slice(t.col(j));
    }
    Ok(ColumnId { js: f.perm[..r].to_vec(), z, residual: f.trailing_frob, warnings })
}

/// Row ID via the column ID of `Aᵀ`: returns `(Is, X)`.
fn id_row(a: &DenseMatrix, k: usize) -> Result<(Vec<usize>, DenseMatrix, f64, Vec<Warning>)> {
    let c = id_col(&a.transpose(), k)?;
    Ok((c.js, c.z.transpose(), c.residual, c.warnings))
}

/// Deterministic ID of rank `k` from column-pivoted QR.
///
/// If the pivoted QR detects numerical rank below `k`, the factors are
/// truncated to that rank and [`Warning::RankTruncated`] is attached.
pub fn id_deterministic(a: &DenseMatrix, k: usize, side: IdSide) -> Result<IdFactors> {
    let mut out = IdFactors { side, js: None, is: None, z: None, x: None, cpqr_residual: None, warnings: Vec::new() };
    match side {
        IdSide::Col => {
            let c = id_col(a, k)?;
            out.js = Some(c.js);
            out.z = Some(c.z);
            out.cpqr_residual = Some(c.residual);
            out.warnings = c.warnings;
        }
        IdSide::Row => {
            let (is, x, res, w) = id_row(a, k)?;
            out.is = Some(is);
            out.x = Some(x);
            out.cpqr_residual = Some(res);
            out.warnings = w;
        }
        IdSide::Double => {
            let c = id_col(a, k)?;
            let (is, x, _, w) = id_row(&a.select_columns(&c.js), c.js.len())?;
            out.js = Some(c.js);
            out.z = Some(c.z);
            out.is = Some(is);
            out.x = Some(x);
            out.cpqr_residual = Some(c.residual);
            out.warnings = c.warnings;
            out.warnings.extend(w);
        }
    }
    Ok(out)
}

fn row_id_from_sample(y: &DenseMatrix, k: usize) -> Result<IdFactors> {
    let (is, x, _, warnings) = id_row(y, k)?;
    Ok(IdFactors { side: IdSide::Row, js: None, is: Some(is), z: None, x: Some(x), cpqr_residual: None, warnings })
}

/// Randomized row ID: the row ID of the sample `(AAᵀ)^q A G`.
pub fn randomized_id(a: &DenseMatrix, k: usize, p: usize, q: usize, seed: u64) -> Result<IdFactors> {
    randomized_id_with(a, &RangeConfig::new(k, seed).with_p(p).with_q(q))
}

/// [`randomized_id`] with full configuration. With `reorthonormalize`
/// the sample is replaced by the orthonormal basis of the stabilized power
/// iteration, which spans the same space.
pub fn randomized_id_with(a: &DenseMatrix, cfg: &RangeConfig) -> Result<IdFactors> {
    let (m, n) = a.shape();
    cfg.validate(m, n)?;
    let y = if cfg.reorthonormalize {
        power_range(a, cfg)?.q
    } else {
        let mut y = a.matmul(&gaussian(cfg.seed, n, cfg.ell()));
        for _ in 0..cfg.q {
            y = a.matmul(&a.tr_matmul(&y));
        }
        y
    };
    row_id_from_sample(&y, cfg.k.min(y.cols()).max(1))
}

/// Row ID of the SRFT sample `A Ω` with `Ω` of width `k + p`.
pub fn fast_randomized_id(a: &DenseMatrix, k: usize, p: usize, seed: u64) -> Result<IdFactors> {
    let (m, n) = a.shape();
    if k == 0 || k > m || k + p > n {
        return Err(Error::param(format!(
            "fast ID needs 1 <= k <= m and k + p <= n, got k = {k}, p = {p} for {m}x{n}"
        )));
    }
    let y = srft_sample(a, k + p, seed)?;
    row_id_from_sample(&y, k)
}

/// CUR decomposition `A ≈ A(:, Js) U A(Is, :)`.
#[derive(Debug, Clone)]
pub struct CurFactors {
    pub js: Vec<usize>,
    pub is: Vec<usize>,
    /// k×k linking matrix.
    pub u: DenseMatrix,
    /// 2-norm condition number of `C = A(:, Js)`.
    pub cond_c: f64,
    /// 2-norm condition number of `R = A(Is, :)`.
    pub cond_r: f64,
    pub warnings: Vec<Warning>,
}

impl CurFactors {
    pub fn c(&self, a: &DenseMatrix) -> DenseMatrix {
        a.select_columns(&self.js)
    }

    pub fn r(&self, a: &DenseMatrix) -> DenseMatrix {
        a.select_rows(&self.is)
    }

    pub fn reconstruct(&self, a: &DenseMatrix) -> DenseMatrix {
        self.c(a).matmul(&self.u).matmul(&self.r(a))
    }
}

/// Randomized CUR with `q` power iterations.
pub fn randomized_cur(a: &DenseMatrix, k: usize, p: usize, q: usize, seed: u64) -> Result<CurFactors> {
    randomized_cur_with(a, &RangeConfig::new(k, seed).with_p(p).with_q(q))
}

/// Randomized CUR: row-space sample `Y = G A (AᵀA)^q`, column ID of `Y` for
/// `Js` and `Z`, row ID of `A(:, Js)` for `Is`, then `U = Z R†`.
/// Condition numbers of `C` and `R` are reported, with a warning above
/// [`CUR_CONDITION_WARN`].
pub fn randomized_cur_with(a: &DenseMatrix, cfg: &RangeConfig) -> Result<CurFactors> {
    let (m, n) = a.shape();
    cfg.validate(m, n)?;
    let g = gaussian(cfg.seed, cfg.ell(), m);
    let mut y = g.matmul(a);
    for _ in 0..cfg.q {
        if cfg.reorthonormalize {
            y = orth(&y.transpose()).transpose();
        }
        let z = y.matmul_tr(a);
        y = z.matmul(a);
    }
    let col = id_col(&y, cfg.k)?;
    let mut warnings = col.warnings;
    let c = a.select_columns(&col.js);
    let (is, _, _, w) = id_row(&c, col.js.len())?;
    warnings.extend(w);
    let r = a.select_rows(&is);
    let u = least_squares(&r.transpose(), &col.z.transpose())?.transpose();
    let cond_c = condition_number(&c)?;
    let cond_r = condition_number(&r)?;
    for (what, cond) in [("C", cond_c), ("R", cond_r)] {
        if cond > CUR_CONDITION_WARN {
            warnings.push(Warning::IllConditioned { what, condition: cond });
        }
    }
    Ok(CurFactors { js: col.js, is, u, cond_c, cond_r, warnings })
}
