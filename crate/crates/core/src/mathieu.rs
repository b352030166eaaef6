//! The rescaled Mathieu operator `M_p = -d²/dθ² - p cos θ` on the circle
//! with periodic boundary conditions, and the rate functional
//! `R(p) = (1/π) tr sqrt((M_p)_-)`.
//!
//! In the Fourier basis `e^{ikθ}`, `k = -K..K`, the operator is exactly
//! tridiagonal: `k²` on the diagonal and `-p/2` between neighbouring modes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigen_tridiag, sturm_count, SymTridiag};

/// Number of lowest eigenvalues that must settle before the cutoff is accepted.
pub const CONVERGENCE_WINDOW: usize = 10;
/// Maximum movement of the watched eigenvalues between two cutoffs.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// How many times the cutoff may be doubled.
pub const MAX_DOUBLINGS: u32 = 6;
/// Safety margin added to `ceil(sqrt(2p))` in the initial cutoff.
pub const MODE_MARGIN: usize = 8;
/// Positive eigenvalues reported beyond the negative ones.
pub const EXTRA_POSITIVE: usize = 10;

/// Smallest admissible Fourier cutoff for coupling `p`.
pub fn min_modes(p: f64) -> usize {
    (2.0 * p.abs()).sqrt().ceil() as usize + MODE_MARGIN
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MathieuProblem {
    p: f64,
    n_modes: usize,
}

impl MathieuProblem {
    /// Problem with the default cutoff. The sign of `p` is dropped since
    /// `p → -p` is the shift `θ → θ + π`.
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::invalid(format!(
                "Mathieu coupling must be finite, got {p}"
            )));
        }
        Ok(Self {
            p: p.abs(),
            n_modes: min_modes(p),
        })
    }

    pub fn with_modes(p: f64, n_modes: usize) -> Result<Self> {
        let mut prob = Self::new(p)?;
        if n_modes < prob.n_modes {
            return Err(Error::invalid(format!(
                "cutoff K = {n_modes} below the minimum {} for p = {}",
                prob.n_modes, prob.p
            )));
        }
        prob.n_modes = n_modes;
        Ok(prob)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MathieuSpectrum {
    /// The problem at the converged cutoff.
    pub problem: MathieuProblem,
    /// All negative eigenvalues plus the next [`EXTRA_POSITIVE`], ascending.
    pub eigenvalues: Vec<f64>,
    pub rate: f64,
}

impl MathieuSpectrum {
    pub fn negative(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().copied().filter(|&l| l < 0.0)
    }
}

/// Tridiagonal matrix in the modes `k = -K..K`, ordered by `k`.
pub fn assemble(problem: &MathieuProblem) -> SymTridiag {
    assemble_modes(problem.p, problem.n_modes).expect("validated problem")
}

/// Raw truncated matrix for any cutoff `K ≥ 1`, bypassing the cutoff rule.
/// Useful for inspecting small truncations; use [`spectrum`] for eigenvalues.
pub fn assemble_modes(p: f64, n_modes: usize) -> Result<SymTridiag> {
    if n_modes == 0 {
        return Err(Error::invalid("Mathieu cutoff must be positive"));
    }
    let k = n_modes as i64;
    let diag: Vec<f64> = (-k..=k).map(|j| (j * j) as f64).collect();
    let off = vec![-0.5 * p; diag.len() - 1];
    SymTridiag::new(diag, off)
}

fn rate_of(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| (-l).max(0.0).sqrt())
        .sum::<f64>()
        / std::f64::consts::PI
}

fn eigen_at(p: f64, n_modes: usize) -> Result<(SymTridiag, Vec<f64>)> {
    let t = assemble(&MathieuProblem { p, n_modes });
    let neg = sturm_count(&t, 0.0)?;
    let k = (neg + EXTRA_POSITIVE).max(CONVERGENCE_WINDOW).min(t.dim());
    let ev = eigen_tridiag(&t, k)?;
    Ok((t, ev))
}

/// Spectrum with cutoff doubling until the lowest [`CONVERGENCE_WINDOW`]
/// eigenvalues are stable to [`CONVERGENCE_TOL`].
pub fn spectrum(problem: &MathieuProblem) -> Result<MathieuSpectrum> {
    let p = problem.p;
    let mut modes = problem.n_modes;
    let (_, mut prev) = eigen_at(p, modes)?;
    for _ in 0..MAX_DOUBLINGS {
        let next_modes = 2 * modes;
        let (_, next) = eigen_at(p, next_modes)?;
        let moved = prev
            .iter()
            .zip(&next)
            .take(CONVERGENCE_WINDOW)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if moved < CONVERGENCE_TOL {
            let rate = if p == 0.0 { 0.0 } else { rate_of(&prev) };
            return Ok(MathieuSpectrum {
                problem: MathieuProblem { p, n_modes: modes },
                eigenvalues: prev,
                rate,
            });
        }
        modes = next_modes;
        prev = next;
    }
    Err(Error::Truncation { p, modes })
}

/// `R(p) = (1/π) Σ sqrt(-λ_j)` over the negative eigenvalues of `M_p`.
pub fn rate(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::invalid(format!(
            "Mathieu coupling must be finite, got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    Ok(spectrum(&MathieuProblem::new(p)?)?.rate)
}

/// The `k` lowest eigenvalues of `M_p`, ascending.
pub fn lowest(p: f64, k: usize) -> Result<Vec<f64>> {
    let spec = spectrum(&MathieuProblem::new(p)?)?;
    if k <= spec.eigenvalues.len() {
        return Ok(spec.eigenvalues[..k].to_vec());
    }
    let t = assemble(&spec.problem);
    if k > t.dim() {
        return Err(Error::invalid(format!(
            "requested {k} Mathieu eigenvalues, cutoff holds {}",
            t.dim()
        )));
    }
    eigen_tridiag(&t, k)
}
