//! Independent reference computations. Nothing here calls into `gapedge`.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

/// Eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off.sqrt() < 1e-15 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn tridiag_dense(diag: &[f64], off: &[f64]) -> Vec<Vec<f64>> {
    let n = diag.len();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
        if i + 1 < n {
            a[i][i + 1] = off[i];
            a[i + 1][i] = off[i];
        }
    }
    a
}

/// Plain bisection on a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..400 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Classical Mathieu characteristic value `a₀(q)` from the continued
/// fraction `a = -2q² / (4 - a - q² / (16 - a - q² / (36 - a - …)))`.
pub fn mathieu_a0(q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    let q2 = q * q;
    // returns (residual, first denominator)
    let g = |a: f64| {
        let mut t = 0.0;
        for n in (2..=80).rev() {
            let m = (2 * n) as f64;
            t = q2 / (m * m - a - t);
        }
        let d = 4.0 - a - t;
        (a + 2.0 * q2 / d, d)
    };
    let mut lo = -2.0 * q - 4.0;
    let step = 1e-3 * (1.0 + q);
    let mut hi = lo;
    loop {
        let next = hi + step;
        let (r, d) = g(next);
        if d <= 0.0 {
            panic!("pole before root");
        }
        if r >= 0.0 {
            lo = hi;
            hi = next;
            break;
        }
        hi = next;
    }
    bisect(|a| g(a).0, lo, hi, 1e-15)
}

/// `K_{iν}(x) = ∫₀^∞ exp(-x cosh t) cos(ν t) dt` by the trapezoid rule,
/// spectrally accurate for this even, smooth, decaying integrand.
pub fn macdonald_k(nu: f64, x: f64) -> f64 {
    let t_max = (2.0 * 60.0 / x).ln() + 1.0;
    let h = 2e-3;
    let n = (t_max / h).ceil() as usize;
    let mut s = 0.5 * (-x).exp();
    for k in 1..=n {
        let t = k as f64 * h;
        s += (-x * t.cosh()).exp() * (nu * t).cos();
    }
    s * h
}

/// Zeros of `K_{iν}` in `(x_lo, ∞)`, descending. There are none above `ν`.
pub fn macdonald_zeros(nu: f64, x_lo: f64) -> Vec<f64> {
    let step = 0.01;
    let (l_lo, l_hi) = (x_lo.ln(), nu.max(1.0).ln() + 1.0);
    let n = ((l_hi - l_lo) / step).ceil() as usize;
    let f = |l: f64| macdonald_k(nu, l.exp());
    let mut zeros = Vec::new();
    let mut prev = (l_hi, f(l_hi));
    for k in 1..=n {
        let l = l_hi - k as f64 * step;
        let l = l.max(l_lo);
        let v = f(l);
        if (v < 0.0) != (prev.1 < 0.0) {
            zeros.push(bisect(f, l, prev.0, 1e-13).exp());
        }
        prev = (l, v);
    }
    zeros
}

/// `J_n(x) = (1/π)∫₀^π cos(nτ - x sin τ) dτ` by the periodic trapezoid rule.
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let m = 400;
    let h = PI / m as f64;
    let mut s = 0.5 * (1.0 + (n as f64 * PI).cos());
    for k in 1..m {
        let t = k as f64 * h;
        s += (n as f64 * t - x * t.sin()).cos();
    }
    s * h / PI
}

/// Roots of `J₀(λ) + J₁(λ)` in `[lo, hi]`, ascending.
pub fn bessel_cross_roots(lo: f64, hi: f64) -> Vec<f64> {
    let f = |x: f64| bessel_j(0, x) + bessel_j(1, x);
    let step = 0.01;
    let n = ((hi - lo) / step).ceil() as usize;
    let mut roots = Vec::new();
    let mut prev = (lo, f(lo));
    for k in 1..=n {
        let x = (lo + k as f64 * step).min(hi);
        let v = f(x);
        if (v < 0.0) != (prev.1 < 0.0) {
            roots.push(bisect(f, prev.0, x, 1e-14));
        }
        prev = (x, v);
    }
    roots
}
