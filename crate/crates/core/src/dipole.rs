//! Exterior Dirichlet dipole Schrödinger operators
//! `-Δ + c cos θ / r²` on `|x| > γ`, separated into Mathieu angular channels
//! and inverse-square radial channels.
//!
//! Each angular eigenvalue `μ_j` of `M_p` with `p = 2m|d|` gives a radial
//! channel `-u'' + (μ_j - 1/4)/r² u`. The two dipole signs give the same
//! channel spectra (the sign flip is the shift `θ → θ + π`), so the total
//! count for both gap edges is twice the channel sum.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mathieu;
use crate::radial::{count_below, log_eps_grid, CountingCurve, RadialChannel};

/// Default regression window in `|log ε|`.
pub const DEFAULT_WINDOW: (f64, f64) = (20.0, 90.0);
/// Window used when the only attractive channel is shallow.
pub const SHALLOW_WINDOW: (f64, f64) = (20.0, 200.0);
/// Channels with `sqrt(-μ)` below this count as shallow.
pub const SHALLOW_FREQ: f64 = 0.5;
pub const WINDOW_POINTS: usize = 30;
/// Nonnegative channels kept beyond the attractive ones.
pub const EXTRA_CHANNELS: usize = 2;

pub const EDGE_FACTOR_NOTE: &str = "N = 2 * sum over channels: flipping the dipole sign maps cos(theta) to -cos(theta), a rotation by pi, so both edges share one Mathieu spectrum";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipoleProblem {
    pub m: f64,
    pub d_abs: f64,
    pub gamma: f64,
    pub p: f64,
}

impl DipoleProblem {
    pub fn new(m: f64, d_abs: f64, gamma: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::invalid(format!("mass must be positive, got {m}")));
        }
        if !(d_abs.is_finite() && d_abs >= 0.0) {
            return Err(Error::invalid(format!(
                "|d| must be nonnegative, got {d_abs}"
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        Ok(Self {
            m,
            d_abs,
            gamma,
            p: 2.0 * m * d_abs,
        })
    }

    /// Problem with angular coupling `p` at mass `m`.
    pub fn from_coupling(m: f64, p: f64, gamma: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::invalid(format!("mass must be positive, got {m}")));
        }
        let mut prob = Self::new(m, p / (2.0 * m), gamma)?;
        prob.p = p;
        Ok(prob)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichParams {
    pub zeta: f64,
    pub eta: f64,
    pub xi: f64,
}

impl SandwichParams {
    pub fn new(zeta: f64, eta: f64, xi: f64) -> Result<Self> {
        for (name, v) in [("zeta", zeta), ("eta", eta), ("xi", xi)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(Self { zeta, eta, xi })
    }

    pub fn uniform(t: f64) -> Result<Self> {
        Self::new(t, t, t)
    }
}

/// The `k` lowest eigenvalues of `M_p`, ascending.
pub fn angular_channels(p: f64, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::invalid("need at least one angular channel"));
    }
    mathieu::lowest(p, k)
}

/// All attractive channels plus [`EXTRA_CHANNELS`] nonnegative ones.
pub fn channel_set(p: f64) -> Result<Vec<f64>> {
    let spec = mathieu::spectrum(&mathieu::MathieuProblem::new(p)?)?;
    let neg = spec.negative().count();
    angular_channels(p, neg + EXTRA_CHANNELS)
}

/// `N(ε) = 2 Σ_j count_below((μ_j, γ), ε)`.
pub fn counting_curve(prob: &DipoleProblem, eps_grid: &[f64]) -> Result<CountingCurve> {
    if eps_grid.is_empty() {
        return Err(Error::invalid("empty eps grid"));
    }
    if let Some(e) = eps_grid.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::invalid(format!(
            "eps values must be positive, got {e}"
        )));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("eps grid must be strictly descending"));
    }
    let meta = format!(
        "dipole m = {}, |d| = {}, gamma = {}, p = {}; {EDGE_FACTOR_NOTE}",
        prob.m, prob.d_abs, prob.gamma, prob.p
    );
    if prob.p == 0.0 {
        return CountingCurve::new(eps_grid.to_vec(), vec![0; eps_grid.len()], meta);
    }
    let channels = channel_set(prob.p)?
        .into_iter()
        .map(|mu| RadialChannel::new(mu, prob.gamma))
        .collect::<Result<Vec<_>>>()?;
    let counts = eps_grid
        .par_iter()
        .map(|&e| {
            channels
                .iter()
                .map(|ch| count_below(ch, e))
                .sum::<Result<usize>>()
                .map(|n| 2 * n)
        })
        .collect::<Result<Vec<_>>>()?;
    CountingCurve::new(eps_grid.to_vec(), counts, meta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCheck {
    pub fitted_slope: f64,
    pub predicted_rate: f64,
    pub rel_err: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub curve: CountingCurve,
}

/// Regression window: the default one unless the only attractive channel
/// is shallow, whose staircase needs a longer run to average out.
pub fn regression_window(p: f64) -> Result<(f64, f64)> {
    if p == 0.0 {
        return Ok(DEFAULT_WINDOW);
    }
    let spec = mathieu::spectrum(&mathieu::MathieuProblem::new(p)?)?;
    let neg: Vec<f64> = spec.negative().collect();
    if neg.len() == 1 && (-neg[0]).sqrt() < SHALLOW_FREQ {
        Ok(SHALLOW_WINDOW)
    } else {
        Ok(DEFAULT_WINDOW)
    }
}

/// Fits `N` against `|log ε|` and compares with `R(p)`.
pub fn verify_rate(prob: &DipoleProblem) -> Result<RateCheck> {
    let window = regression_window(prob.p)?;
    let grid = log_eps_grid(window.0, window.1, WINDOW_POINTS)?;
    let curve = counting_curve(prob, &grid)?;
    if prob.p == 0.0 {
        return Ok(RateCheck {
            fitted_slope: 0.0,
            predicted_rate: 0.0,
            rel_err: 0.0,
            stderr: 0.0,
            window,
            curve,
        });
    }
    let fit = curve.fit()?;
    let predicted = mathieu::rate(prob.p)?;
    Ok(RateCheck {
        fitted_slope: fit.slope,
        predicted_rate: predicted,
        rel_err: (fit.slope - predicted).abs() / predicted,
        stderr: fit.slope_stderr,
        window,
        curve,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichCouplings {
    pub p_lower: f64,
    pub p_upper: f64,
}

/// `p_lower = p/((1+ζ)(1+ξ))`, `p_upper = p/((1-ζ)(1-η))`.
pub fn sandwich_coefficients(prob: &DipoleProblem, s: &SandwichParams) -> SandwichCouplings {
    SandwichCouplings {
        p_lower: prob.p / ((1.0 + s.zeta) * (1.0 + s.xi)),
        p_upper: prob.p / ((1.0 - s.zeta) * (1.0 - s.eta)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeMap {
    pub eps: f64,
    pub log_ratio: f64,
}

/// Maps the Dirac edge distance `m - E` to `ε = m² - E²`.
pub fn edge_map(e: f64, m: f64) -> Result<EdgeMap> {
    if !(m.is_finite() && m > 0.0 && e > 0.0 && e < m) {
        return Err(Error::invalid(format!(
            "need 0 < E < m, got E = {e}, m = {m}"
        )));
    }
    let eps = (m - e) * (m + e);
    Ok(EdgeMap {
        eps,
        log_ratio: (eps.ln() / (m - e).ln()).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sandwich_arithmetic() {
        let prob = DipoleProblem::new(1.0, 1.0, 1.0).unwrap();
        let c = sandwich_coefficients(&prob, &SandwichParams::uniform(0.1).unwrap());
        assert!((c.p_lower - 2.0 / 1.21).abs() < 1e-14);
        assert!((c.p_upper - 2.0 / 0.81).abs() < 1e-14);
        assert!(SandwichParams::new(0.0, 0.1, 0.1).is_err());
    }

    #[test]
    fn edge_map_examples() {
        let em = edge_map(1.0, 2.0).unwrap();
        assert_eq!(em.eps, 3.0);
        let em = edge_map(1.0 - 1e-8, 1.0).unwrap();
        assert!((em.eps - 2e-8).abs() < 1e-15);
        // log ε = log 2 + log(m - E), so the ratio sits below 1 by log 2 / |log(m - E)|
        assert!((em.log_ratio - (1.0 - 2f64.ln() / 1e-8f64.ln().abs())).abs() < 1e-6);
        assert!(edge_map(1.0, 1.0).is_err());
    }

    #[test]
    fn zero_coupling_counts_nothing() {
        let prob = DipoleProblem::new(1.0, 0.0, 1.0).unwrap();
        let r = verify_rate(&prob).unwrap();
        assert!(r.curve.counts.iter().all(|&c| c == 0));
        assert_eq!(r.rel_err, 0.0);
    }
}
