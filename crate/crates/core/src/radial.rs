//! Eigenvalue counting for `-u'' + (μ - 1/4)/r² u` on `(γ, ∞)` with a
//! Dirichlet condition at `γ`.
//!
//! With `r = γ e^s` and `u = e^{s/2} w` the equation `(H + ε) u = 0` becomes
//! `w'' = (μ + ε γ² e^{2s}) w`. For `μ < 0` the solution oscillates with
//! frequency about `sqrt(-μ)` up to the turning point
//! `s* = ½ log(-μ / (ε γ²))` and is convex beyond it. Zeros of the Dirichlet
//! solution are counted with a scaled Prüfer angle, which by the oscillation
//! theorem equals the number of eigenvalues below `-ε`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{integrate_ode, linfit, LineFit};

/// Relative tolerance of the Prüfer integration.
pub const PRUFER_REL_TOL: f64 = 1e-10;
/// Step between checks of the no-more-zeros certificate past the turning point.
pub const TAIL_STEP: f64 = 0.25;
/// Largest distance past the turning point searched for the certificate.
pub const TAIL_MARGIN: f64 = 10.0;
/// Smallest edge distance probed by [`lowest_eigenvalues`].
pub const MIN_EPS: f64 = 1e-60;
/// Absolute tolerance in `log ε` for located eigenvalues.
pub const LOG_EPS_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialChannel {
    mu: f64,
    gamma: f64,
}

impl RadialChannel {
    pub fn new(mu: f64, gamma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::invalid(format!(
                "angular eigenvalue must be finite, got {mu}"
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!(
                "inner radius must be positive, got {gamma}"
            )));
        }
        Ok(Self { mu, gamma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Samples `(ε, N(ε))` with `ε` strictly decreasing and `N` nondecreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountingCurve {
    pub eps: Vec<f64>,
    pub counts: Vec<usize>,
    pub metadata: String,
}

impl CountingCurve {
    pub fn new(eps: Vec<f64>, counts: Vec<usize>, metadata: impl Into<String>) -> Result<Self> {
        if eps.len() != counts.len() {
            return Err(Error::invalid("counting curve: length mismatch"));
        }
        if eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid(
                "counting curve: eps must be strictly decreasing",
            ));
        }
        if counts.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Numerical(
                "counting curve: counts decrease as eps decreases".into(),
            ));
        }
        Ok(Self {
            eps,
            counts,
            metadata: metadata.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps.is_empty()
    }

    pub fn log_eps(&self) -> Vec<f64> {
        self.eps.iter().map(|e| e.ln().abs()).collect()
    }

    /// Least-squares line of `N` against `|log ε|`.
    pub fn fit(&self) -> Result<LineFit> {
        let ys: Vec<f64> = self.counts.iter().map(|&c| c as f64).collect();
        linfit(&self.log_eps(), &ys)
    }
}

/// `n` points with `|log ε|` evenly spaced on `[lo, hi]`, `ε` descending.
pub fn log_eps_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) || n < 2 {
        return Err(Error::invalid(format!(
            "bad |log eps| window [{lo}, {hi}] with {n} points"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| (-(lo + i as f64 * step)).exp()).collect())
}

/// Per-channel accumulation rate `sqrt(max(-μ, 0)) / (2π)`.
pub fn channel_slope(mu: f64) -> f64 {
    (-mu).max(0.0).sqrt() / (2.0 * PI)
}

/// Number of eigenvalues below `-eps`.
pub fn count_below(ch: &RadialChannel, eps: f64) -> Result<usize> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::invalid(format!(
            "edge distance must be positive, got {eps}"
        )));
    }
    if ch.mu >= 0.0 {
        // w'' = q w with q > 0 everywhere: no zeros
        return Ok(0);
    }
    let nu = (-ch.mu).sqrt();
    let a = eps * (ch.gamma * ch.gamma);
    let turning = 0.5 * (nu * nu / a).ln();
    if turning <= 0.0 {
        return Ok(0);
    }
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let (sn, cs) = y[0].sin_cos();
        dy[0] = nu * cs * cs + (nu * nu - a * (2.0 * s).exp()) / nu * sn * sn;
    };
    let certified = |theta: f64| theta.rem_euclid(PI) < 0.5 * PI;
    let mut s = 0.0;
    let mut theta = integrate_ode(&rhs, s, turning, &[0.0], PRUFER_REL_TOL)?[0];
    s = turning;
    while !certified(theta) {
        if s > turning + TAIL_MARGIN {
            return Err(Error::Numerical(format!(
                "Prüfer phase not settled {TAIL_MARGIN} log-units past the turning point (mu = {}, eps = {eps})",
                ch.mu
            )));
        }
        theta = integrate_ode(&rhs, s, s + TAIL_STEP, &[theta], PRUFER_REL_TOL)?[0];
        s += TAIL_STEP;
    }
    Ok((theta / PI).floor() as usize)
}

/// Counting curve of a single channel over a descending `eps` grid.
pub fn counting_curve(ch: &RadialChannel, eps_grid: &[f64]) -> Result<CountingCurve> {
    let counts = eps_grid
        .par_iter()
        .map(|&e| count_below(ch, e))
        .collect::<Result<Vec<_>>>()?;
    CountingCurve::new(
        eps_grid.to_vec(),
        counts,
        format!("radial channel mu = {}, gamma = {}", ch.mu, ch.gamma),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueList {
    /// Eigenvalues `-ε_n`, deepest first.
    pub values: Vec<f64>,
    /// Fewer than the requested number exist above `-MIN_EPS`.
    pub partial: bool,
}

/// The `k` deepest eigenvalues, located by bisecting `count_below` in `log ε`.
/// Successive values approach 0 geometrically.
pub fn lowest_eigenvalues(ch: &RadialChannel, k: usize) -> Result<EigenvalueList> {
    if ch.mu >= 0.0 {
        return Ok(EigenvalueList {
            values: Vec::new(),
            partial: k > 0,
        });
    }
    // H ≥ (μ - 1/4)/γ² on (γ, ∞)
    let log_hi = ((0.25 - ch.mu) / (ch.gamma * ch.gamma)).ln() + 0.01;
    let log_lo = MIN_EPS.ln();
    let count = |l: f64| count_below(ch, l.exp());
    let available = count(log_lo)?;
    let want = k.min(available);
    let mut values = Vec::with_capacity(want);
    let mut upper = log_hi;
    for n in 1..=want {
        // largest log ε with count ≥ n lies in [log_lo, upper]
        let (mut lo, mut hi) = (log_lo, upper);
        while hi - lo > LOG_EPS_TOL {
            let mid = 0.5 * (lo + hi);
            if count(mid)? >= n {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let l = 0.5 * (lo + hi);
        values.push(-l.exp());
        upper = l;
    }
    Ok(EigenvalueList {
        values,
        partial: want < k,
    })
}
