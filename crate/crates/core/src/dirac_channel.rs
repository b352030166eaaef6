//! Radial Dirac–Coulomb channels
//! `d_κ^ν = [[ν/r, -∂_r - κ/r], [∂_r - κ/r, ν/r]]` on `(0, ϑ)` with the
//! boundary condition `ψ₁(ϑ) = ψ₂(ϑ)`.
//!
//! Near `r = 0` solutions behave like `r^{±s}`, `s = sqrt(κ² - ν²)`. The
//! distinguished extension keeps the `r^{+s}` branch. Eigenvalues are found
//! by shooting in `t = log r` with the Prüfer angle `θ = atan2(ψ₂, ψ₁)`,
//! which obeys `θ' = ν - λ e^t - κ sin 2θ` and decreases monotonically in
//! `λ`. The boundary condition reads `θ(log ϑ) ≡ π/4 (mod π)`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{brent_root, integrate_ode};

/// Default relative tolerance of the phase integration.
pub const SHOOTING_REL_TOL: f64 = 1e-12;
/// Absolute tolerance on located eigenvalues.
pub const EIGEN_TOL: f64 = 1e-12;
/// Largest start radius as a fraction of `ϑ`.
pub const SEED_LIMIT: f64 = 1e-3;
/// Absolute cap on the start radius.
pub const SEED_R0_MAX: f64 = 1e-6;

/// Half-integer `κ ∈ ℤ + 1/2`, stored as the odd integer `2κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Kappa {
    twice: i64,
}

impl Kappa {
    pub fn new(kappa: f64) -> Result<Self> {
        let t = 2.0 * kappa;
        if !t.is_finite() || t.fract() != 0.0 || (t as i64) % 2 == 0 || t.abs() > 1e15 {
            return Err(Error::invalid(format!(
                "kappa must be a half-integer, got {kappa}"
            )));
        }
        Ok(Self { twice: t as i64 })
    }

    pub fn from_twice(twice: i64) -> Result<Self> {
        if twice % 2 == 0 {
            return Err(Error::invalid(format!("2 kappa must be odd, got {twice}")));
        }
        Ok(Self { twice })
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice)
    }
}

impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiracChannelSpec {
    pub kappa: Kappa,
    pub nu: f64,
    pub theta: f64,
}

impl DiracChannelSpec {
    /// `ν = 0` is admitted as the free test limit.
    pub fn new(kappa: Kappa, nu: f64, theta: f64) -> Result<Self> {
        if !(nu.is_finite() && nu.abs() < 0.5) {
            return Err(Error::invalid(format!("need |nu| < 1/2, got {nu}")));
        }
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::invalid(format!(
                "outer radius must be positive, got {theta}"
            )));
        }
        Ok(Self { kappa, nu, theta })
    }

    /// Frobenius exponent `s = sqrt(κ² - ν²)`.
    pub fn exponent(&self) -> f64 {
        let k = self.kappa.value();
        (k * k - self.nu * self.nu).sqrt()
    }

    pub fn default_r0(&self) -> f64 {
        SEED_R0_MAX.min(SEED_LIMIT * self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndpointClass {
    LimitCircle,
    LimitPoint,
}

/// Limit circle at 0 iff both `r^{±s}` are square integrable, i.e. `s < 1/2`.
pub fn classify(kappa: Kappa, nu: f64) -> EndpointClass {
    let k = kappa.value();
    if (k * k - nu * nu).sqrt() < 0.5 {
        EndpointClass::LimitCircle
    } else {
        EndpointClass::LimitPoint
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrobeniusSeed {
    pub branch: Branch,
    pub vector: [f64; 2],
    pub exponent: f64,
}

/// Leading behaviour `(-ν, ±s - κ) r^{±s}`.
pub fn frobenius(spec: &DiracChannelSpec, branch: Branch) -> FrobeniusSeed {
    let s = spec.exponent();
    let k = spec.kappa.value();
    let sign = match branch {
        Branch::Plus => 1.0,
        Branch::Minus => -1.0,
    };
    FrobeniusSeed {
        branch,
        vector: [-spec.nu, sign * s - k],
        exponent: sign * s,
    }
}

/// Unit direction of the `r^{+s}` branch, nondegenerate for every `ν`
/// including 0.
fn plus_direction(spec: &DiracChannelSpec) -> [f64; 2] {
    let s = spec.exponent();
    let k = spec.kappa.value();
    let v = if k > 0.0 {
        [k + s, spec.nu]
    } else {
        [-spec.nu, s - k]
    };
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

fn check_r0(spec: &DiracChannelSpec, r0: f64) -> Result<()> {
    let limit = SEED_LIMIT * spec.theta;
    if !(r0 > 0.0 && r0 <= limit) {
        return Err(Error::SeedAccuracy { r0, limit });
    }
    Ok(())
}

/// Start vector at `r0` for eigenvalue parameter `lambda`: the `r^{+s}`
/// branch with its first-order correction, `r0^s (a + b r0)`.
pub fn seed(spec: &DiracChannelSpec, r0: f64, lambda: f64) -> Result<[f64; 2]> {
    check_r0(spec, r0)?;
    let a = plus_direction(spec);
    let [c1, c2] = correction(spec, a, lambda);
    let scale = r0.powf(spec.exponent());
    Ok([scale * (a[0] + c1 * r0), scale * (a[1] + c2 * r0)])
}

/// `b` solving `[[s+1-κ, ν], [ν, -(s+1+κ)]] b = λ (a₂, a₁)`.
fn correction(spec: &DiracChannelSpec, a: [f64; 2], lambda: f64) -> [f64; 2] {
    let s = spec.exponent();
    let k = spec.kappa.value();
    let nu = spec.nu;
    let (m11, m12, m22) = (s + 1.0 - k, nu, -(s + 1.0 + k));
    let det = -(2.0 * s + 1.0);
    let (r1, r2) = (lambda * a[1], lambda * a[0]);
    [(m22 * r1 - m12 * r2) / det, (m11 * r2 - m12 * r1) / det]
}

/// Shooting controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shooting {
    pub r0: f64,
    pub rel_tol: f64,
}

impl Shooting {
    pub fn for_spec(spec: &DiracChannelSpec) -> Self {
        Self {
            r0: spec.default_r0(),
            rel_tol: SHOOTING_REL_TOL,
        }
    }
}

/// Prüfer angle at `ϑ` for the distinguished solution.
pub fn end_phase(spec: &DiracChannelSpec, lambda: f64, opts: &Shooting) -> Result<f64> {
    if !lambda.is_finite() {
        return Err(Error::invalid(format!(
            "eigenvalue parameter must be finite, got {lambda}"
        )));
    }
    check_r0(spec, opts.r0)?;
    let a = plus_direction(spec);
    let c = correction(spec, a, lambda);
    let theta0 = (a[1] + c[1] * opts.r0).atan2(a[0] + c[0] * opts.r0);
    let (nu, k) = (spec.nu, spec.kappa.value());
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = nu - lambda * t.exp() - k * (2.0 * y[0]).sin();
    };
    Ok(integrate_ode(&rhs, opts.r0.ln(), spec.theta.ln(), &[theta0], opts.rel_tol)?[0])
}

/// `ψ₁(ϑ) - ψ₂(ϑ)` on the unit-normalized solution.
pub fn miss(spec: &DiracChannelSpec, lambda: f64, opts: &Shooting) -> Result<f64> {
    let th = end_phase(spec, lambda, opts)?;
    Ok(th.cos() - th.sin())
}

/// Eigenvalues in `[lo, hi]`, ascending, at most `max_count` of them
/// (the lowest ones when the window holds more).
pub fn eigenvalues(
    spec: &DiracChannelSpec,
    window: (f64, f64),
    max_count: usize,
) -> Result<Vec<f64>> {
    eigenvalues_with(spec, window, max_count, &Shooting::for_spec(spec))
}

pub fn eigenvalues_with(
    spec: &DiracChannelSpec,
    window: (f64, f64),
    max_count: usize,
    opts: &Shooting,
) -> Result<Vec<f64>> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(format!(
            "bad eigenvalue window [{lo}, {hi}]"
        )));
    }
    let phase = |l: f64| end_phase(spec, l, opts);
    let th_lo = phase(lo)?;
    let th_hi = phase(hi)?;
    // Θ decreases in λ: the branches π/4 + jπ crossed between hi and lo
    let j_max = ((th_lo - FRAC_PI_4) / PI).floor() as i64;
    let j_min = ((th_hi - FRAC_PI_4) / PI).ceil() as i64;
    let mut out = Vec::new();
    let mut left = lo;
    let mut failure = None;
    for j in (j_min..=j_max).rev() {
        if out.len() == max_count {
            break;
        }
        let target = FRAC_PI_4 + j as f64 * PI;
        let f = |l: f64| match phase(l) {
            Ok(t) => t - target,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        let root = brent_root(f, left, hi, EIGEN_TOL);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let root = root?;
        out.push(root);
        left = root;
    }
    Ok(out)
}

/// Smallest `|λ|` over the spectrum, searching `[-w, w]` with `w` doubled
/// until an eigenvalue appears.
pub fn min_modulus(spec: &DiracChannelSpec) -> Result<f64> {
    let mut w = (spec.kappa.value().abs() + 1.0) / spec.theta;
    for _ in 0..60 {
        let ev = eigenvalues(spec, (-w, w), usize::MAX)?;
        if let Some(m) = ev.iter().map(|l| l.abs()).min_by(f64::total_cmp) {
            return Ok(m);
        }
        w *= 2.0;
    }
    Err(Error::Numerical(format!(
        "no eigenvalue found in [-{w}, {w}] for kappa = {}",
        spec.kappa
    )))
}

/// Left side minus right side of the `S_κ` inequality
/// `|2κ-3|² + 6(2κ-3) - 4|2κ-3|(|ν|+1/2) ≥ κ²` behind `min_modulus ≥ |κ|/(2ϑ)`.
pub fn s_kappa_margin(kappa: Kappa, nu: f64) -> f64 {
    let k = kappa.value().abs();
    let a = (2.0 * k - 3.0).abs();
    a * a + 6.0 * (2.0 * k - 3.0) - 4.0 * a * (nu.abs() + 0.5) - k * k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_must_be_half_integer() {
        assert!(Kappa::new(1.0).is_err());
        assert!(Kappa::new(0.3).is_err());
        assert_eq!(Kappa::new(-1.5).unwrap().twice(), -3);
        assert!(Kappa::from_twice(4).is_err());
    }

    #[test]
    fn leading_seed() {
        let spec = DiracChannelSpec::new(Kappa::new(0.5).unwrap(), 0.3, 1.0).unwrap();
        assert!((spec.exponent() - 0.4).abs() < 1e-15);
        let v = seed(&spec, 1e-6, 0.0).unwrap();
        let scale = 1e-6f64.powf(0.4) / 0.9f64.hypot(0.3);
        assert!((v[0] - 0.9 * scale).abs() < 1e-15);
        assert!((v[1] - 0.3 * scale).abs() < 1e-15);
        assert!(matches!(
            seed(&spec, 0.1, 0.0),
            Err(Error::SeedAccuracy { .. })
        ));
    }

    #[test]
    fn frobenius_vectors_solve_the_indicial_system() {
        let spec = DiracChannelSpec::new(Kappa::new(-1.5).unwrap(), 0.2, 1.0).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let f = frobenius(&spec, b);
            let [a1, a2] = f.vector;
            let (k, nu, e) = (-1.5, 0.2, f.exponent);
            assert!(((e - k) * a1 + nu * a2).abs() < 1e-14);
            assert!(((e + k) * a2 - nu * a1).abs() < 1e-14);
        }
    }
}
