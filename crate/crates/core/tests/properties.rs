mod common;

use common::{max_abs_diff, projection_error_frob};
use proptest::prelude::*;
use randfact_core::dense::{cpqr, householder_qr, pinv, svd, CpqrStop};
use randfact_core::fullfact::{hqrrp, randutv};
use randfact_core::lowrank::{id_deterministic, nystrom_evd, rsvd_with, single_pass_svd, IdSide, MatrixStream};
use randfact_core::rangefinder::{basic_range, frob_residual, power_range};
use randfact_core::sketch::{fft_unitary, ifft_unitary, Complex64};
use randfact_core::{DenseMatrix, RangeConfig};

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(m, n)| {
        prop::collection::vec(-10.0..10.0f64, m * n)
            .prop_map(move |data| DenseMatrix::from_col_major(m, n, data).unwrap())
    })
}

/// Random matrix of at most the given rank, as a product of two factors.
fn low_rank(max_dim: usize, max_rank: usize) -> impl Strategy<Value = DenseMatrix> {
    (4..=max_dim, 4..=max_dim, 1..=max_rank)
        .prop_flat_map(|(m, n, r)| (matrix_of(m, r), matrix_of(r, n)).prop_map(|(x, y)| x.matmul(&y)))
}

fn matrix_of(m: usize, n: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(-1.0..1.0f64, m * n).prop_map(move |d| DenseMatrix::from_col_major(m, n, d).unwrap())
}

fn orth_defect(q: &DenseMatrix) -> f64 {
    max_abs_diff(&q.tr_matmul(q), &DenseMatrix::identity(q.cols()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn householder_qr_reconstructs(a in matrix(14, 14)) {
        let (q, r) = householder_qr(&a);
        prop_assert!(orth_defect(&q) <= 1e-12);
        prop_assert!(a.sub(&q.matmul(&r)).frob_norm() <= 1e-12 * a.frob_norm().max(1.0));
        for i in 0..r.rows().min(r.cols()) {
            prop_assert!(r[(i, i)] >= 0.0);
        }
    }

    #[test]
    fn cpqr_full_is_valid_and_monotone(a in matrix(14, 14)) {
        let f = cpqr(&a, CpqrStop::Full);
        prop_assert!(f.reconstruct().sub(&a).frob_norm() <= 1e-12 * a.frob_norm().max(1e-300));
        prop_assert!(orth_defect(&f.q) <= 1e-12);
        for i in 1..f.stopped_rank {
            prop_assert!(f.r[(i, i)].abs() <= f.r[(i - 1, i - 1)].abs() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn svd_reconstructs_with_sorted_values(a in matrix(14, 14)) {
        let f = svd(&a).unwrap();
        prop_assert!(f.reconstruct().sub(&a).frob_norm() <= 1e-10 * a.frob_norm().max(1e-300));
        prop_assert!(f.s.windows(2).all(|w| w[1] <= w[0]) && f.s.iter().all(|&s| s >= 0.0));
        prop_assert!(orth_defect(&f.u) <= 1e-12 && orth_defect(&f.v) <= 1e-12);
    }

    #[test]
    fn pseudoinverse_identities(a in low_rank(12, 3)) {
        let p = pinv(&a).unwrap();
        prop_assert!(a.matmul(&p).matmul(&a).sub(&a).frob_norm() <= 1e-10 * a.frob_norm());
        prop_assert!(p.matmul(&a).matmul(&p).sub(&p).frob_norm() <= 1e-10 * p.frob_norm());
    }

    #[test]
    fn fft_round_trip(re in prop::collection::vec(-5.0..5.0f64, 1..70)) {
        let x: Vec<Complex64> = re.iter().enumerate().map(|(i, &r)| Complex64::new(r, 0.3 * i as f64)).collect();
        let back = ifft_unitary(&fft_unitary(&x));
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * (1.0 + x.len() as f64 * 0.3));
    }

    #[test]
    fn basic_range_residual_bookkeeping(a in matrix_of(20, 16), k in 1usize..6, seed in any::<u64>()) {
        let cfg = RangeConfig::new(k, seed).with_p(3);
        let basis = basic_range(&a, &cfg).unwrap();
        prop_assert!(orth_defect(&basis.q) <= 1e-10);
        let b = basis.b.as_ref().unwrap();
        let direct = projection_error_frob(&a, &basis.q);
        prop_assert!((basis.residual_frob.unwrap() - direct).abs() <= 1e-10 * a.frob_norm());
        let down = frob_residual(a.frob_norm(), b).unwrap();
        prop_assert!((down - direct).abs() <= 1e-8 * a.frob_norm());
        let again = power_range(&a, &cfg).unwrap();
        prop_assert_eq!(again.q.as_slice(), basis.q.as_slice());
    }

    #[test]
    fn rsvd_stage_b_is_exact(a in matrix_of(18, 15), k in 1usize..5, q in 0usize..3, seed in any::<u64>()) {
        let cfg = RangeConfig::new(k, seed).with_p(4).with_q(q);
        let f = rsvd_with(&a, &cfg, false).unwrap();
        let basis = power_range(&a, &cfg).unwrap();
        let diff = f.reconstruct().sub(&a).frob_norm() - projection_error_frob(&a, &basis.q);
        prop_assert!(diff.abs() <= 1e-10 * a.frob_norm());
    }

    #[test]
    fn column_id_structure_and_error(a in matrix(12, 12), k in 1usize..6) {
        let k = k.min(a.rows().min(a.cols()));
        let f = id_deterministic(&a, k, IdSide::Col).unwrap();
        let z = f.z.as_ref().unwrap();
        for (r, &j) in f.js.as_ref().unwrap().iter().enumerate() {
            for c in 0..f.rank() {
                prop_assert_eq!(z[(c, j)], if c == r { 1.0 } else { 0.0 });
            }
        }
        let err = f.reconstruct(&a).sub(&a).frob_norm();
        prop_assert!((err - f.cpqr_residual.unwrap()).abs() <= 1e-10 * a.frob_norm());
    }

    #[test]
    fn hqrrp_is_valid(a in matrix(16, 16), b in 1usize..6, p in 0usize..5, seed in any::<u64>()) {
        let f = hqrrp(&a, b, p, seed).unwrap();
        let err = a.select_columns(&f.perm).sub(&f.q.matmul(&f.r)).frob_norm();
        prop_assert!(err <= 1e-11 * a.frob_norm().max(1e-300));
        prop_assert!(orth_defect(&f.q) <= 1e-11);
    }

    #[test]
    fn randutv_is_valid(a in matrix(16, 16), b in 1usize..6, q in 0usize..3, seed in any::<u64>()) {
        let f = randutv(&a, b, q, seed).unwrap();
        let norm = a.frob_norm();
        prop_assert!(f.reconstruct().sub(&a).frob_norm() <= 1e-10 * norm);
        prop_assert!((f.t.frob_norm() - norm).abs() <= 1e-10 * norm);
        prop_assert!(orth_defect(&f.u) <= 1e-11 && orth_defect(&f.v) <= 1e-11);
    }

    #[test]
    fn nystrom_eigenvalues_are_nonnegative_and_sorted(x in matrix_of(20, 8), k in 1usize..5, seed in any::<u64>()) {
        let a = x.matmul_tr(&x);
        let f = nystrom_evd(&a, k, 2, seed).unwrap();
        prop_assert!(f.lambda.iter().all(|&l| l >= 0.0));
        prop_assert!(f.lambda.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(orth_defect(&f.u) <= 1e-10);
    }

    #[test]
    fn single_pass_svd_reads_the_stream_once(a in matrix_of(15, 12), block in 1usize..13, seed in any::<u64>()) {
        let mut stream = MatrixStream::from_matrix(&a, block);
        let f = single_pass_svd(&mut stream, 3, 3, seed).unwrap();
        let t = stream.telemetry();
        prop_assert_eq!((t.passes, t.entries, t.violations), (1, 15 * 12, 0));
        prop_assert!(f.factors.s.windows(2).all(|w| w[1] <= w[0]));
    }
}
