//! Charge distributions `ρ = ρ_sing + ρ_reg` in the graphene plane: point
//! charges with subcritical couplings plus smooth Gaussian clouds.
//!
//! Provides the total charge `Q`, the dipole moment `d`, the radius `γ`
//! (twice the largest distance of a point charge from the origin), the
//! potential `V` and the effective rest potential
//! `R = V_reg + [V_sing - <d, x>/|x|³] χ(|x| ≥ γ)`, along with numerical
//! diagnostics for the integrability hypotheses.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative threshold below which `Q` counts as zero.
pub const NEUTRALITY_TOL: f64 = 1e-12;
/// Largest dyadic shell index used by the integrability diagnostics.
pub const MAX_SHELL: u32 = 14;
/// A shell whose share of the running total is below this counts as negligible.
pub const SHELL_TOL: f64 = 0.01;

const RADIAL_NODES: usize = 32;
const ANGULAR_NODES: usize = 128;
const REARRANGE_RADIAL: usize = 400;
const REARRANGE_ANGULAR: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointCharge {
    pub position: [f64; 2],
    /// Dimensionless coupling `ν`, subcritical when `0 < |ν| < 1/2`.
    pub coupling: f64,
}

/// Isotropic 3D Gaussian cloud of total charge `total_charge`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularCharge {
    pub center: [f64; 3],
    pub total_charge: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ChargeDistribution {
    pub points: Vec<PointCharge>,
    pub regulars: Vec<RegularCharge>,
}

impl ChargeDistribution {
    pub fn new(points: Vec<PointCharge>, regulars: Vec<RegularCharge>) -> Self {
        Self { points, regulars }
    }

    /// `+ν` at `(a, 0)` and `-ν` at `(-a, 0)`.
    pub fn two_point_dipole(a: f64, nu: f64) -> Self {
        Self::new(
            vec![
                PointCharge {
                    position: [a, 0.0],
                    coupling: nu,
                },
                PointCharge {
                    position: [-a, 0.0],
                    coupling: -nu,
                },
            ],
            Vec::new(),
        )
    }

    /// Disjoint union.
    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.points.extend_from_slice(&other.points);
        out.regulars.extend_from_slice(&other.regulars);
        out
    }

    /// Rotate every charge about the origin (in-plane, about the normal axis).
    pub fn rotated(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        let rot = |x: f64, y: f64| [c * x - s * y, s * x + c * y];
        Self {
            points: self
                .points
                .iter()
                .map(|p| PointCharge {
                    position: rot(p.position[0], p.position[1]),
                    ..*p
                })
                .collect(),
            regulars: self
                .regulars
                .iter()
                .map(|g| {
                    let [x, y] = rot(g.center[0], g.center[1]);
                    RegularCharge {
                        center: [x, y, g.center[2]],
                        ..*g
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    Empty,
    NonFinite { what: String },
    ZeroCoupling { index: usize },
    CriticalCoupling { index: usize, coupling: f64 },
    CoincidentPoints { first: usize, second: usize },
    NonPositiveWidth { index: usize, width: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty distribution: at least one charge required"),
            Violation::NonFinite { what } => write!(f, "non-finite value in {what}"),
            Violation::ZeroCoupling { index } => {
                write!(f, "zero coupling at point charge {index}")
            }
            Violation::CriticalCoupling { index, coupling } => write!(
                f,
                "critical coupling at point charge {index}: |{coupling}| >= 1/2"
            ),
            Violation::CoincidentPoints { first, second } => {
                write!(f, "coincident point charges {first} and {second}")
            }
            Violation::NonPositiveWidth { index, width } => {
                write!(f, "regular charge {index} has non-positive width {width}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(ToString::to_string).collect()
    }
}

pub fn validate(dist: &ChargeDistribution) -> ValidationReport {
    let mut violations = Vec::new();
    if dist.points.is_empty() && dist.regulars.is_empty() {
        violations.push(Violation::Empty);
    }
    for (i, p) in dist.points.iter().enumerate() {
        if !(p.position.iter().all(|v| v.is_finite()) && p.coupling.is_finite()) {
            violations.push(Violation::NonFinite {
                what: format!("point charge {i}"),
            });
            continue;
        }
        if p.coupling == 0.0 {
            violations.push(Violation::ZeroCoupling { index: i });
        } else if p.coupling.abs() >= 0.5 {
            violations.push(Violation::CriticalCoupling {
                index: i,
                coupling: p.coupling,
            });
        }
        for (j, q) in dist.points.iter().enumerate().skip(i + 1) {
            if p.position == q.position {
                violations.push(Violation::CoincidentPoints {
                    first: i,
                    second: j,
                });
            }
        }
    }
    for (i, g) in dist.regulars.iter().enumerate() {
        if !(g.center.iter().all(|v| v.is_finite())
            && g.total_charge.is_finite()
            && g.width.is_finite())
        {
            violations.push(Violation::NonFinite {
                what: format!("regular charge {i}"),
            });
        } else if g.width <= 0.0 {
            violations.push(Violation::NonPositiveWidth {
                index: i,
                width: g.width,
            });
        }
    }
    ValidationReport { violations }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargeMoments {
    pub total_charge: f64,
    pub dipole: [f64; 2],
    pub gamma: f64,
}

impl ChargeMoments {
    pub fn dipole_abs(&self) -> f64 {
        self.dipole[0].hypot(self.dipole[1])
    }
}

pub fn moments(dist: &ChargeDistribution) -> ChargeMoments {
    let mut q = 0.0;
    let mut d = [0.0; 2];
    let mut gamma = 0.0_f64;
    for p in &dist.points {
        q += p.coupling;
        d[0] += p.coupling * p.position[0];
        d[1] += p.coupling * p.position[1];
        gamma = gamma.max(2.0 * p.position[0].hypot(p.position[1]));
    }
    for g in &dist.regulars {
        q += g.total_charge;
        d[0] += g.total_charge * g.center[0];
        d[1] += g.total_charge * g.center[1];
    }
    ChargeMoments {
        total_charge: q,
        dipole: d,
        gamma,
    }
}

fn gaussian_potential(g: &RegularCharge, x: [f64; 2]) -> f64 {
    let dx = x[0] - g.center[0];
    let dy = x[1] - g.center[1];
    let dz = g.center[2];
    let r = (dx * dx + dy * dy + dz * dz).sqrt();
    let z = r / (std::f64::consts::SQRT_2 * g.width);
    if z < 1e-5 {
        // erf(z)/z = 2/sqrt(pi) (1 - z²/3 + ...)
        g.total_charge * (2.0 / PI).sqrt() / g.width * (1.0 - z * z / 3.0)
    } else {
        g.total_charge * libm::erf(z) / r
    }
}

fn singular_potential(dist: &ChargeDistribution, x: [f64; 2]) -> Result<f64> {
    let mut v = 0.0;
    for p in &dist.points {
        let r = (x[0] - p.position[0]).hypot(x[1] - p.position[1]);
        if r == 0.0 {
            return Err(Error::Singularity { x: x[0], y: x[1] });
        }
        v += p.coupling / r;
    }
    Ok(v)
}

/// Potential of the regular (Gaussian) part alone.
pub fn regular_potential(dist: &ChargeDistribution, x: [f64; 2]) -> f64 {
    dist.regulars.iter().map(|g| gaussian_potential(g, x)).sum()
}

/// `V(x) = Σ ν_n/|x - x_n| + Σ q erf(|(x,0) - c|/(√2 w))/|(x,0) - c|`.
pub fn potential(dist: &ChargeDistribution, x: [f64; 2]) -> Result<f64> {
    Ok(singular_potential(dist, x)? + regular_potential(dist, x))
}

fn rest_with(dist: &ChargeDistribution, mom: &ChargeMoments, x: [f64; 2]) -> Result<f64> {
    let reg = regular_potential(dist, x);
    let r = x[0].hypot(x[1]);
    if r < mom.gamma {
        // inside B_γ the singular part is excluded, but a point charge is
        // still a point where the potential is undefined
        if dist.points.iter().any(|p| p.position == x) {
            return Err(Error::Singularity { x: x[0], y: x[1] });
        }
        return Ok(reg);
    }
    let sing = singular_potential(dist, x)?;
    let dip = mom.dipole[0] * x[0] + mom.dipole[1] * x[1];
    if dip == 0.0 {
        return Ok(reg + sing);
    }
    if r == 0.0 {
        return Err(Error::Singularity { x: x[0], y: x[1] });
    }
    Ok(reg + sing - dip / (r * r * r))
}

/// Effective rest potential `R(x)`.
pub fn rest_potential(dist: &ChargeDistribution, x: [f64; 2]) -> Result<f64> {
    rest_with(dist, &moments(dist), x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedIntegral {
    pub value: f64,
    /// Contribution of the inner disk followed by each dyadic shell.
    pub shells: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub validation: Vec<String>,
    pub moments: ChargeMoments,
    pub charge_neutral: bool,
    pub dipole_nonzero: bool,
    /// `∫|R| log(2+|x|) dx`.
    pub abs_weighted: WeightedIntegral,
    /// `∫R² log(2+|x|) dx`.
    pub sq_weighted: WeightedIntegral,
    /// `∫_0^1 |R|_*(r) log(1/r) dr` from a sorted equal-area sample.
    pub abs_rearranged: f64,
    /// Same for `R²`.
    pub sq_rearranged: f64,
    /// Rest potential unbounded at the origin (no excision radius).
    pub inner_singular: bool,
    /// Hypotheses that are assumed rather than checked, with the reason.
    pub assumed: Vec<String>,
    pub theorem_applicable: bool,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn annulus_integrals<F: Fn([f64; 2]) -> f64>(
    f: &F,
    r0: f64,
    r1: f64,
    gl: &(Vec<f64>, Vec<f64>),
) -> (f64, f64) {
    let (xs, ws) = gl;
    let half = 0.5 * (r1 - r0);
    let mid = 0.5 * (r1 + r0);
    let dphi = 2.0 * PI / ANGULAR_NODES as f64;
    let (mut a, mut b) = (0.0, 0.0);
    for (x, w) in xs.iter().zip(ws) {
        let r = mid + half * x;
        let weight = w * half * r * dphi * (2.0 + r).ln();
        for k in 0..ANGULAR_NODES {
            let phi = (k as f64 + 0.5) * dphi;
            let v = f([r * phi.cos(), r * phi.sin()]);
            a += weight * v.abs();
            b += weight * v * v;
        }
    }
    (a, b)
}

fn shell_converged(shells: &[f64]) -> bool {
    let total: f64 = shells.iter().sum();
    if !total.is_finite() {
        return false;
    }
    if total == 0.0 {
        return true;
    }
    shells[shells.len() - 2..]
        .iter()
        .all(|s| *s < SHELL_TOL * total)
}

fn length_scale(dist: &ChargeDistribution, mom: &ChargeMoments) -> f64 {
    if mom.gamma > 0.0 {
        return mom.gamma;
    }
    let mut s = 0.0_f64;
    for g in &dist.regulars {
        s = s.max(g.center[0].hypot(g.center[1]) + g.width);
    }
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

/// `∫_0^1 f_*(r) log(1/r) dr` where `f_*` is the radially decreasing
/// rearrangement of the samples, each sample carrying area `cell`.
fn rearranged_integral(mut samples: Vec<f64>, cell: f64) -> f64 {
    samples.sort_by(|a, b| b.total_cmp(a));
    let anti = |r: f64| if r > 0.0 { r - r * r.ln() } else { 0.0 };
    let mut acc = 0.0;
    for (k, v) in samples.iter().enumerate() {
        let lo = (k as f64 * cell / PI).sqrt();
        if lo >= 1.0 {
            break;
        }
        let hi = (((k + 1) as f64 * cell) / PI).sqrt().min(1.0);
        acc += v * (anti(hi) - anti(lo));
    }
    acc
}

pub fn hypothesis_diagnostics(dist: &ChargeDistribution) -> HypothesisReport {
    let validation = validate(dist);
    let mom = moments(dist);
    let scale = length_scale(dist, &mom);
    let charge_sum: f64 = dist.points.iter().map(|p| p.coupling.abs()).sum::<f64>()
        + dist
            .regulars
            .iter()
            .map(|g| g.total_charge.abs())
            .sum::<f64>();
    let charge_neutral =
        mom.total_charge.abs() <= NEUTRALITY_TOL * charge_sum.max(f64::MIN_POSITIVE);
    let dipole_nonzero = mom.dipole_abs() > NEUTRALITY_TOL * charge_sum * scale;
    let inner_singular = mom.gamma == 0.0 && (!dist.points.is_empty() || dipole_nonzero);

    let rest = |x: [f64; 2]| rest_with(dist, &mom, x).unwrap_or(f64::INFINITY);
    let gl = gauss_legendre(RADIAL_NODES);
    let mut abs_shells = Vec::with_capacity(MAX_SHELL as usize + 1);
    let mut sq_shells = Vec::with_capacity(MAX_SHELL as usize + 1);
    let (a, b) = annulus_integrals(&rest, 0.0, scale, &gl);
    abs_shells.push(a);
    sq_shells.push(b);
    for j in 1..=MAX_SHELL {
        let lo = scale * 2f64.powi(j as i32 - 1);
        let (a, b) = annulus_integrals(&rest, lo, 2.0 * lo, &gl);
        abs_shells.push(a);
        sq_shells.push(b);
    }
    let weighted = |shells: Vec<f64>| WeightedIntegral {
        value: shells.iter().sum(),
        converged: !inner_singular && shell_converged(&shells),
        shells,
    };

    let rho = (8.0 * scale).max(4.0);
    let cell = PI * rho * rho / (REARRANGE_RADIAL * REARRANGE_ANGULAR) as f64;
    let mut abs_samples = Vec::with_capacity(REARRANGE_RADIAL * REARRANGE_ANGULAR);
    for i in 0..REARRANGE_RADIAL {
        let r = rho * ((i as f64 + 0.5) / REARRANGE_RADIAL as f64).sqrt();
        for k in 0..REARRANGE_ANGULAR {
            let phi = 2.0 * PI * (k as f64 + 0.5) / REARRANGE_ANGULAR as f64;
            abs_samples.push(rest([r * phi.cos(), r * phi.sin()]).abs());
        }
    }
    let sq_samples: Vec<f64> = abs_samples.iter().map(|v| v * v).collect();

    let abs_weighted = weighted(abs_shells);
    let sq_weighted = weighted(sq_shells);
    let theorem_applicable = validation.is_valid()
        && charge_neutral
        && dipole_nonzero
        && abs_weighted.converged
        && sq_weighted.converged;
    HypothesisReport {
        validation: validation.messages(),
        moments: mom,
        charge_neutral,
        dipole_nonzero,
        abs_weighted,
        sq_weighted,
        abs_rearranged: rearranged_integral(abs_samples, cell),
        sq_rearranged: rearranged_integral(sq_samples, cell),
        inner_singular,
        assumed: vec![
            "relative boundedness of V_reg: assumed; Gaussian potentials are bounded, hence relatively bounded with bound 0".into(),
            "relative compactness of V_reg²: assumed; bounded and vanishing at infinity".into(),
            "V_reg bounded near point charges: holds; Gaussian potentials are bounded everywhere".into(),
        ],
        theorem_applicable,
    }
}
