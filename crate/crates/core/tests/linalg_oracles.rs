use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tmrabi::linalg::{
    eig_sym_dense, eig_sym_tridiag, eig_sym_tridiag_vectors, expm_antisymmetric, DenseSym, Matrix, TridiagMatrix,
};

/// Number of eigenvalues below `x`, from the LDLᵀ pivots.
fn sturm(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_eigs(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let bound = diag.iter().map(|d| d.abs()).sum::<f64>() + 2.0 * off.iter().map(|e| e.abs()).sum::<f64>() + 1.0;
    (0..diag.len())
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if sturm(diag, off, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

#[test]
fn ql_matches_bisection_on_random_tridiagonals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let diag: Vec<f64> = (0..12).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let off: Vec<f64> = (0..11).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let got = eig_sym_tridiag(&TridiagMatrix::new(diag.clone(), off.clone()).unwrap()).unwrap();
        let expect = bisect_eigs(&diag, &off);
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-12, "{g} vs {e}");
        }
    }
}

#[test]
fn tridiagonal_eigenvectors_are_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 25;
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let (_, v) = eig_sym_tridiag_vectors(&TridiagMatrix::new(diag, off).unwrap()).unwrap();
    for a in 0..n {
        for b in 0..n {
            let dot: f64 = (0..n).map(|i| v[i * n + a] * v[i * n + b]).sum();
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((dot - expect).abs() < 1e-12);
        }
    }
}

#[test]
fn dense_residual_six_by_six() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 6;
    let a = DenseSym::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
    let eig = eig_sym_dense(&a, true).unwrap();
    let v = eig.vectors.unwrap();
    for (k, &lam) in eig.values.iter().enumerate() {
        for i in 0..n {
            let av: f64 = (0..n).map(|j| a.get(i, j) * v[j * n + k]).sum();
            assert!((av - lam * v[i * n + k]).abs() < 1e-13);
        }
    }
    // trace and Frobenius norm are invariants of the spectrum
    let trace: f64 = (0..n).map(|i| a.get(i, i)).sum();
    let frob: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a.get(i, j).powi(2)).sum();
    assert!((eig.values.iter().sum::<f64>() - trace).abs() < 1e-13);
    assert!((eig.values.iter().map(|x| x * x).sum::<f64>() - frob).abs() < 1e-12);
}

#[test]
fn expm_inverse_and_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 20;
    let mut g = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..i {
            let x = rng.gen_range(-1.5..1.5);
            g.set(i, j, x);
            g.set(j, i, -x);
        }
    }
    let q = expm_antisymmetric(&g).unwrap();
    let q_inv = expm_antisymmetric(&g.scale(-1.0)).unwrap();
    assert!(q.matmul(&q_inv).max_abs_diff(&Matrix::identity(n)) < 1e-12);
    assert!(q.transpose().max_abs_diff(&q_inv) < 1e-12);
    assert!((q.determinant() - 1.0).abs() < 1e-11);
}

#[test]
fn expm_rotation_generator_in_block() {
    // exp of θ J on a 2x2 block embedded in a larger zero matrix.
    let theta = 2.7;
    let mut g = Matrix::zeros(4);
    g.set(1, 2, -theta);
    g.set(2, 1, theta);
    let q = expm_antisymmetric(&g).unwrap();
    assert!((q.get(1, 1) - theta.cos()).abs() < 1e-14);
    assert!((q.get(2, 1) - theta.sin()).abs() < 1e-14);
    assert!((q.get(0, 0) - 1.0).abs() < 1e-15 && (q.get(3, 3) - 1.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn weyl_perturbation_bound(
        diag in prop::collection::vec(-5.0f64..5.0, 15),
        off in prop::collection::vec(-2.0f64..2.0, 14),
        shift in prop::collection::vec(-0.1f64..0.1, 15),
    ) {
        let a = eig_sym_tridiag(&TridiagMatrix::new(diag.clone(), off.clone()).unwrap()).unwrap();
        let perturbed: Vec<f64> = diag.iter().zip(&shift).map(|(d, s)| d + s).collect();
        let b = eig_sym_tridiag(&TridiagMatrix::new(perturbed, off).unwrap()).unwrap();
        let norm = shift.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= norm + 1e-12);
        }
    }

    #[test]
    fn sturm_count_agrees_with_spectrum(
        diag in prop::collection::vec(-5.0f64..5.0, 10),
        off in prop::collection::vec(-2.0f64..2.0, 9),
        x in -8.0f64..8.0,
    ) {
        let t = TridiagMatrix::new(diag, off).unwrap();
        let ev = eig_sym_tridiag(&t).unwrap();
        if ev.iter().all(|e| (e - x).abs() > 1e-9) {
            prop_assert_eq!(t.sturm_count(x), ev.iter().filter(|&&e| e < x).count());
        }
    }
}
