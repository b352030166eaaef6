//! Coupled-channel discretization of the 2D massive Dirac operator
//! `-iσ·∇ + mσ₃ + |d| cos θ / r²` and in-gap eigenvalue counting by inertia.
//!
//! Each angular channel `κ ∈ {-k_max, …, k_max}` is a radial Dirac operator
//! `[[m, -∂_r - κ/r], [∂_r - κ/r, -m]]`; the dipole couples `κ ↔ κ ± 1` with
//! `|d|/(2r²)` on equal spinor components.
//!
//! Staggering: on a geometric grid `r_i` the two spinor components live on
//! the nodes and on the geometric midpoints `ρ_j = sqrt(r_j r_{j+1})`. For
//! `κ > 0` the upper component sits on nodes, for `κ < 0` on midpoints. The
//! off-diagonal part of every channel is then `Ã` or its transpose for one
//! forward-difference operator `Ã`, so the free channel squares to
//! `m² + ÃᵀÃ ⊕ ÃÃᵀ` and its gap `(-m, m)` stays exactly empty. The layout is
//! also exactly covariant under the charge-parity map
//! `κ → -κ`, upper ↔ lower, which sends the dipole matrix `H` to `-H`.
//!
//! Unknowns are scaled by the square roots of their dual cell lengths so
//! the matrix is symmetric. Block `i` of the block-tridiagonal matrix holds
//! node `i` and midpoint `i` of every channel.

use rayon::prelude::*;
use serde::Serialize;

use crate::dirac_channel::Kappa;
use crate::error::{Error, Result};
use crate::linalg::{eigen_tridiag, ldlt_inertia, linfit, BlockTridiag, LineFit, SymTridiag};
use crate::mathieu;

/// Inner radius in units of `1/m`.
pub const R_MIN_FACTOR: f64 = 1e-3;
/// Inner radius in units of `|d|`. Inside `r ≈ |d|/10` the dipole term
/// outgrows both the radial grid and any fixed channel cutoff, and the
/// in-gap count there stops converging.
pub const R_MIN_DIPOLE_FACTOR: f64 = 0.1;
/// Outer radius in units of `(m² - E_max²)^{-1/2}`.
pub const R_MAX_FACTOR: f64 = 50.0;
pub const MIN_RADIAL_POINTS: usize = 200;
/// Smallest channel cutoff, as `2 k_max`.
pub const MIN_K_MAX_TWICE: i64 = 5;
/// Relative shift applied when a factorization hits a near-zero pivot.
pub const RESHIFT: f64 = 1e-9;
pub const MAX_RESHIFTS: usize = 8;
/// Tolerance of the channel-cutoff rule.
pub const K_MAX_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dirac2DConfig {
    pub m: f64,
    pub d_abs: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub k_max: Kappa,
    pub e_grid: Vec<f64>,
}

impl Dirac2DConfig {
    /// Config with the default radial domain
    /// `r_min = max(1e-3/m, |d|/10)`, `r_max = 50/sqrt(m² - E_max²)`.
    pub fn new(m: f64, d_abs: f64, n_r: usize, k_max: Kappa, e_grid: Vec<f64>) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::invalid(format!("mass must be positive, got {m}")));
        }
        let e_max = e_grid.iter().copied().fold(0.0_f64, f64::max);
        let gap = if e_max < m {
            (m - e_max) * (m + e_max)
        } else {
            0.0
        };
        let r_max = if gap > 0.0 {
            R_MAX_FACTOR / gap.sqrt()
        } else {
            f64::NAN
        };
        let r_min = (R_MIN_FACTOR / m).max(R_MIN_DIPOLE_FACTOR * d_abs);
        Self::with_radii(m, d_abs, r_min, r_max, n_r, k_max, e_grid)
    }

    pub fn with_radii(
        m: f64,
        d_abs: f64,
        r_min: f64,
        r_max: f64,
        n_r: usize,
        k_max: Kappa,
        e_grid: Vec<f64>,
    ) -> Result<Self> {
        let cfg = Self {
            m,
            d_abs,
            r_min,
            r_max,
            n_r,
            k_max,
            e_grid,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(Error::invalid(format!(
                "mass must be positive, got {}",
                self.m
            )));
        }
        if !(self.d_abs.is_finite() && self.d_abs >= 0.0) {
            return Err(Error::invalid(format!(
                "|d| must be nonnegative, got {}",
                self.d_abs
            )));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < r_min < r_max, got r_min = {}, r_max = {}",
                self.r_min, self.r_max
            )));
        }
        if self.n_r < MIN_RADIAL_POINTS {
            return Err(Error::invalid(format!(
                "n_r must be at least {MIN_RADIAL_POINTS}, got {}",
                self.n_r
            )));
        }
        if self.k_max.twice() < MIN_K_MAX_TWICE {
            return Err(Error::invalid(format!(
                "k_max must be at least 5/2, got {}",
                self.k_max
            )));
        }
        if let Some(e) = self.e_grid.iter().find(|&&e| !(e > 0.0 && e < self.m)) {
            return Err(Error::invalid(format!(
                "energies must lie in (0, m), got {e}"
            )));
        }
        if self.e_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("energy grid must be strictly ascending"));
        }
        Ok(())
    }

    /// Channels `-k_max, …, k_max` in ascending order.
    pub fn channels(&self) -> Vec<Kappa> {
        let k = self.k_max.twice();
        (-k..=k)
            .step_by(2)
            .map(|t| Kappa::from_twice(t).expect("odd"))
            .collect()
    }

    /// Same physics on a radial grid with `n_r` points.
    pub fn with_points(&self, n_r: usize) -> Result<Self> {
        let mut c = self.clone();
        c.n_r = n_r;
        c.validate()?;
        Ok(c)
    }
}

/// Geometric radial grid: nodes `r_0 = r_min, …, r_{n+1} = r_max` and
/// midpoints `ρ_j = sqrt(r_j r_{j+1})`, `j = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub mids: Vec<f64>,
}

impl RadialGrid {
    pub fn geometric(r_min: f64, r_max: f64, n: usize) -> Self {
        let q = (r_max / r_min).ln() / (n + 1) as f64;
        let mut nodes: Vec<f64> = (0..=n + 1).map(|i| r_min * (q * i as f64).exp()).collect();
        nodes[n + 1] = r_max;
        let mids = nodes.windows(2).map(|w| (w[0] * w[1]).sqrt()).collect();
        Self { nodes, mids }
    }

    /// Dual cell length of node `i`, `1 ≤ i ≤ n`.
    fn node_weight(&self, i: usize) -> f64 {
        self.mids[i] - self.mids[i - 1]
    }

    /// Dual cell length of midpoint `j`, `1 ≤ j ≤ n`.
    fn mid_weight(&self, j: usize) -> f64 {
        self.nodes[j + 1] - self.nodes[j]
    }
}

struct Layout {
    s: usize,
    /// Per channel: `|κ|`, sign of `κ`.
    chans: Vec<(f64, f64)>,
}

impl Layout {
    fn node(&self, c: usize) -> usize {
        2 * c
    }

    fn mid(&self, c: usize) -> usize {
        2 * c + 1
    }
}

/// Block-tridiagonal Hamiltonian in scaled variables.
pub fn assemble(config: &Dirac2DConfig) -> Result<BlockTridiag> {
    config.validate()?;
    let n = config.n_r;
    let grid = RadialGrid::geometric(config.r_min, config.r_max, n);
    let chans: Vec<(f64, f64)> = config
        .channels()
        .iter()
        .map(|k| (k.value().abs(), k.value().signum()))
        .collect();
    let nc = chans.len();
    let lay = Layout { s: 2 * nc, chans };
    let s = lay.s;
    let m = config.m;
    let half_v = |r: f64| 0.5 * config.d_abs / (r * r);

    let mut diag = vec![vec![0.0; s * s]; n];
    let mut off = vec![vec![0.0; s * s]; n - 1];
    let set = |blk: &mut [f64], r: usize, c: usize, v: f64| {
        blk[r * s + c] += v;
        if r != c {
            blk[c * s + r] += v;
        }
    };

    for i in 1..=n {
        let b = i - 1;
        let w_node = grid.node_weight(i);
        let w_mid = grid.mid_weight(i);
        let rho = grid.mids[i];
        for (c, &(k, sign)) in lay.chans.iter().enumerate() {
            // upper component carries +m
            set(&mut diag[b], lay.node(c), lay.node(c), sign * m);
            set(&mut diag[b], lay.mid(c), lay.mid(c), -sign * m);
            // forward difference (∂_r - k/r): node i → midpoint i, and node i+1 → midpoint i
            let a_ii = -1.0 / w_mid - k / (2.0 * rho);
            set(
                &mut diag[b],
                lay.mid(c),
                lay.node(c),
                sign * a_ii * (w_mid / w_node).sqrt(),
            );
            if i < n {
                let a_next = 1.0 / w_mid - k / (2.0 * rho);
                let w_next = grid.node_weight(i + 1);
                // row: midpoint i in block b; column: node i+1 in block b+1
                off[b][lay.mid(c) * s + lay.node(c)] += sign * a_next * (w_mid / w_next).sqrt();
            }
        }
        if config.d_abs == 0.0 {
            continue;
        }
        for c in 0..nc - 1 {
            let (k0, s0) = lay.chans[c];
            let (_, s1) = lay.chans[c + 1];
            if s0 == s1 {
                set(
                    &mut diag[b],
                    lay.node(c),
                    lay.node(c + 1),
                    half_v(grid.nodes[i]),
                );
                set(&mut diag[b], lay.mid(c), lay.mid(c + 1), half_v(rho));
            } else {
                debug_assert!(k0 == 0.5 && s0 < 0.0);
                // κ = -1/2 ↔ 1/2: node values couple to the average of the
                // neighbouring midpoints
                let v = 0.5 * half_v(grid.nodes[i]);
                for (node_c, mid_c) in [(c + 1, c), (c, c + 1)] {
                    let e = v * (w_node / w_mid).sqrt();
                    set(&mut diag[b], lay.node(node_c), lay.mid(mid_c), e);
                    if i > 1 {
                        let e = v * (w_node / grid.mid_weight(i - 1)).sqrt();
                        // row: midpoint i-1 in block b-1; column: node i in block b
                        off[b - 1][lay.mid(mid_c) * s + lay.node(node_c)] += e;
                    }
                }
            }
        }
    }
    BlockTridiag::new(s, diag, off)
}

/// Eigenvalues below `shift`, retrying slightly above on near-zero pivots.
fn count_below(h: &BlockTridiag, shift: f64, m: f64) -> Result<usize> {
    let mut x = shift;
    for _ in 0..=MAX_RESHIFTS {
        let inertia = ldlt_inertia(h, x)?;
        if inertia.n_zero == 0 {
            return Ok(inertia.n_minus);
        }
        x += RESHIFT * m;
    }
    Err(Error::NumericalBreakdown { shift })
}

/// `N_{(-E, E)}` of an assembled matrix.
pub fn count_in_gap_of(h: &BlockTridiag, m: f64, e: f64) -> Result<usize> {
    if !(e > 0.0 && e < m) {
        return Err(Error::invalid(format!(
            "need 0 < E < m, got E = {e}, m = {m}"
        )));
    }
    let (below_hi, below_lo) = rayon::join(|| count_below(h, e, m), || count_below(h, -e, m));
    Ok(below_hi?.saturating_sub(below_lo?))
}

pub fn count_in_gap(config: &Dirac2DConfig, e: f64) -> Result<usize> {
    count_in_gap_of(&assemble(config)?, config.m, e)
}

/// Eigenvalues in `[0, E)` and in `(-E, 0)`, for the spectral symmetry check.
pub fn half_gap_counts(h: &BlockTridiag, m: f64, e: f64) -> Result<(usize, usize)> {
    if !(e > 0.0 && e < m) {
        return Err(Error::invalid(format!(
            "need 0 < E < m, got E = {e}, m = {m}"
        )));
    }
    let hi = count_below(h, e, m)?;
    let zero = count_below(h, 0.0, m)?;
    let lo = count_below(h, -e, m)?;
    Ok((zero.saturating_sub(lo), hi.saturating_sub(zero)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCountCurve {
    pub energies: Vec<f64>,
    pub counts: Vec<usize>,
    /// `N` against `|log(m - E)|`.
    pub fit: LineFit,
    pub predicted_rate: f64,
    /// Slope of the same fit at `n_r / 2`.
    pub coarse_slope: f64,
    pub coarse_stderr: f64,
    /// The coarse slope agrees with the fine one within its own standard error.
    pub grid_converged: bool,
}

fn counts_over(config: &Dirac2DConfig) -> Result<Vec<usize>> {
    let h = assemble(config)?;
    config
        .e_grid
        .par_iter()
        .map(|&e| count_in_gap_of(&h, config.m, e))
        .collect()
}

fn fit_counts(config: &Dirac2DConfig, counts: &[usize]) -> Result<LineFit> {
    let xs: Vec<f64> = config
        .e_grid
        .iter()
        .map(|e| (config.m - e).ln().abs())
        .collect();
    let ys: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    linfit(&xs, &ys)
}

/// Counts over the energy grid with a slope fit and a grid-halving check.
pub fn gap_slope(config: &Dirac2DConfig) -> Result<GapCountCurve> {
    config.validate()?;
    let counts = counts_over(config)?;
    if counts.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Numerical(format!(
            "in-gap counts decrease with E: {counts:?}"
        )));
    }
    let fit = fit_counts(config, &counts)?;
    let coarse_n = (config.n_r / 2).max(MIN_RADIAL_POINTS);
    let coarse = config.with_points(coarse_n)?;
    let coarse_fit = fit_counts(&coarse, &counts_over(&coarse)?)?;
    let predicted_rate = mathieu::rate(2.0 * config.m * config.d_abs)?;
    Ok(GapCountCurve {
        energies: config.e_grid.clone(),
        grid_converged: (coarse_fit.slope - fit.slope).abs() <= coarse_fit.slope_stderr,
        counts,
        fit,
        predicted_rate,
        coarse_slope: coarse_fit.slope,
        coarse_stderr: coarse_fit.slope_stderr,
    })
}

/// Lowest eigenvalue of `-∂² - p cos` restricted to the angular modes
/// `ℓ = κ - 1/2` carried by the channels `|κ| ≤ k_max`.
pub fn truncated_mathieu_ground(p: f64, k_max: Kappa) -> Result<f64> {
    let k = k_max.twice();
    // ℓ runs over -(k+1)/2 ..= (k-1)/2
    let ls: Vec<f64> = (-(k + 1) / 2..=(k - 1) / 2)
        .map(|l| (l * l) as f64)
        .collect();
    let off = vec![-0.5 * p; ls.len() - 1];
    Ok(eigen_tridiag(&SymTridiag::new(ls, off)?, 1)?[0])
}

/// Smallest cutoff `k_max ≥ 5/2` whose truncated angular ground state moves
/// by less than [`K_MAX_TOL`] when `k_max` grows by 2.
pub fn choose_k_max(p: f64) -> Result<Kappa> {
    let mut k = Kappa::from_twice(MIN_K_MAX_TWICE)?;
    for _ in 0..200 {
        let bigger = Kappa::from_twice(k.twice() + 4)?;
        let a = truncated_mathieu_ground(p, k)?;
        let b = truncated_mathieu_ground(p, bigger)?;
        if (a - b).abs() < K_MAX_TOL {
            return Ok(k);
        }
        k = Kappa::from_twice(k.twice() + 2)?;
    }
    Err(Error::Truncation {
        p,
        modes: k.twice() as usize,
    })
}

/// `E` values with `m - E` log-spaced from `m·delta_hi` down to `m·delta_lo`.
pub fn edge_energy_grid(m: f64, delta_hi: f64, delta_lo: f64, n: usize) -> Result<Vec<f64>> {
    if !(0.0 < delta_lo && delta_lo < delta_hi && delta_hi < 1.0) || n < 2 {
        return Err(Error::invalid(format!(
            "bad edge window [{delta_lo}, {delta_hi}] with {n} points"
        )));
    }
    let (a, b) = (delta_hi.ln(), delta_lo.ln());
    Ok((0..n)
        .map(|i| m * (1.0 - (a + (b - a) * i as f64 / (n - 1) as f64).exp()))
        .collect())
}
