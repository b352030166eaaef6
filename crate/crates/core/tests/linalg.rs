mod common;

use gapedge::linalg::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tri(diag: &[f64], off: &[f64]) -> SymTridiag {
    SymTridiag::new(diag.to_vec(), off.to_vec()).unwrap()
}

#[test]
fn sturm_small_examples() {
    assert_eq!(
        sturm_count(&tri(&[0.0, 1.0, 1.0], &[0.0, 0.0]), 0.5).unwrap(),
        1
    );
    assert_eq!(sturm_count(&tri(&[2.0, 2.0], &[-1.0]), 1.5).unwrap(), 1);
    assert_eq!(sturm_count(&tri(&[2.0, 2.0], &[-1.0]), 4.0).unwrap(), 2);
}

#[test]
fn eigen_small_examples() {
    let ev = eigen_tridiag(&tri(&[0.0, 1.0, 1.0, 4.0, 4.0], &[0.0; 4]), 3).unwrap();
    assert_eq!(ev.len(), 3);
    for (a, b) in ev.iter().zip([0.0, 1.0, 1.0]) {
        assert!((a - b).abs() < 1e-12);
    }
    let ev = eigen_tridiag(&tri(&[2.0, 2.0], &[-1.0]), 2).unwrap();
    assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
}

#[test]
fn random_tridiag_matches_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let diag: Vec<f64> = (0..50).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let off: Vec<f64> = (0..49).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let ours = eigen_tridiag(&tri(&diag, &off), 50).unwrap();
        let oracle = common::jacobi_eigenvalues(common::tridiag_dense(&diag, &off));
        for (a, b) in ours.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn inertia_small_examples() {
    let id =
        BlockTridiag::new(2, vec![vec![1.0, 0.0, 0.0, 1.0]; 3], vec![vec![0.0; 4]; 2]).unwrap();
    let i = ldlt_inertia(&id, 0.0).unwrap();
    assert_eq!((i.n_minus, i.n_zero, i.n_plus), (0, 0, 6));
    let d = BlockTridiag::new(2, vec![vec![-1.0, 0.0, 0.0, 2.0]], vec![]).unwrap();
    let i = ldlt_inertia(&d, 0.0).unwrap();
    assert_eq!((i.n_minus, i.n_plus), (1, 1));
}

#[test]
fn scalar_block_chain_agrees_with_sturm() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 80;
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let t = tri(&diag, &off);
    let b = BlockTridiag::new(
        1,
        diag.iter().map(|&d| vec![d]).collect(),
        off.iter().map(|&o| vec![o]).collect(),
    )
    .unwrap();
    for _ in 0..100 {
        let shift = rng.gen_range(-6.0..6.0);
        assert_eq!(
            ldlt_inertia(&b, shift).unwrap().n_minus,
            sturm_count(&t, shift).unwrap(),
            "shift {shift}"
        );
    }
}

#[test]
fn block_inertia_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (s, nb) = (3, 6);
    let mut diag = Vec::new();
    for _ in 0..nb {
        let mut d = vec![0.0; s * s];
        for r in 0..s {
            for c in r..s {
                let v = rng.gen_range(-2.0..2.0);
                d[r * s + c] = v;
                d[c * s + r] = v;
            }
        }
        diag.push(d);
    }
    let off: Vec<Vec<f64>> = (0..nb - 1)
        .map(|_| (0..s * s).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let b = BlockTridiag::new(s, diag, off).unwrap();
    let ev = common::jacobi_eigenvalues(b.to_dense());
    for _ in 0..50 {
        let shift = rng.gen_range(-5.0..5.0);
        let expect = ev.iter().filter(|&&l| l < shift).count();
        assert_eq!(ldlt_inertia(&b, shift).unwrap().n_minus, expect);
    }
    // reordering within blocks is a similarity
    let p = b.permuted(&[2, 0, 1]).unwrap();
    for shift in [-1.0, 0.3, 2.0] {
        assert_eq!(
            ldlt_inertia(&b, shift).unwrap(),
            ldlt_inertia(&p, shift).unwrap()
        );
    }
}

#[test]
fn ode_examples() {
    let y = integrate_ode(
        &|_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0],
        0.0,
        1.0,
        &[1.0],
        1e-10,
    )
    .unwrap();
    assert!((y[0] - std::f64::consts::E).abs() < 1e-9);

    let osc = |_t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    let y = integrate_ode(&osc, 0.0, 20.0 * std::f64::consts::PI, &[1.0, 0.0], 1e-10).unwrap();
    assert!((y[0] * y[0] + y[1] * y[1] - 1.0).abs() < 1e-6);

    let smooth = |t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = (t * y[1]).cos() - 0.1 * y[0];
        dy[1] = y[0].sin();
    };
    let a = integrate_ode(&smooth, 0.0, 5.0, &[0.2, 1.0], 1e-8).unwrap();
    let b = integrate_ode(&smooth, 0.0, 5.0, &[0.2, 1.0], 1e-11).unwrap();
    assert!((a[0] - b[0]).abs() < 1e-6 && (a[1] - b[1]).abs() < 1e-6);
}

#[test]
fn root_examples() {
    let r = brent_root(f64::cos, 1.0, 2.0, 1e-14).unwrap();
    assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let r = brent_root(|x| x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn linfit_examples() {
    let xs: Vec<f64> = (0..10).map(f64::from).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
    let f = linfit(&xs, &ys).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
    assert!(f.slope_stderr < 1e-12);
    let f = linfit(&xs, &[3.0; 10]).unwrap();
    assert!(f.slope.abs() < 1e-14);
}

#[test]
fn linfit_noisy_line_within_three_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let xs: Vec<f64> = (0..40).map(|i| i as f64 * 0.5).collect();
    let mut inside = 0;
    for _ in 0..100 {
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 0.7 * x - 3.0 + rng.gen_range(-1.0..1.0))
            .collect();
        let f = linfit(&xs, &ys).unwrap();
        if (f.slope - 0.7).abs() <= 3.0 * f.slope_stderr {
            inside += 1;
        }
    }
    // 3σ covers ~99.7%; allow a couple of outliers
    assert!(inside >= 97, "{inside}/100");
}

proptest! {
    #[test]
    fn brent_agrees_with_bisection(a in 0.5f64..3.0, b in -2.0f64..2.0) {
        let f = |x: f64| a * x + x.powi(3) - b;
        let r1 = brent_root(f, -3.0, 3.0, 1e-13).unwrap();
        let r2 = bisect_root(f, -3.0, 3.0, 1e-13).unwrap();
        let r3 = common::bisect(f, -3.0, 3.0, 1e-13);
        prop_assert!((r1 - r2).abs() < 1e-11);
        prop_assert!((r1 - r3).abs() < 1e-11);
    }

    #[test]
    fn sturm_count_is_monotone(seed in 0u64..1000, s1 in -5.0f64..5.0, s2 in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let diag: Vec<f64> = (0..20).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let off: Vec<f64> = (0..19).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let t = tri(&diag, &off);
        let (lo, hi) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        prop_assert!(sturm_count(&t, lo).unwrap() <= sturm_count(&t, hi).unwrap());
    }
}
