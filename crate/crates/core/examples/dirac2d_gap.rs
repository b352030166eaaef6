//! In-gap eigenvalue counts of the 2D Dirac operator with a point dipole.
//! Uses a modest grid; pass `full` for the n_r = 4000 run (about 15 s).
use gapedge::dirac2d::{self, Dirac2DConfig};
use gapedge::dirac_channel::Kappa;

fn main() -> Result<(), gapedge::Error> {
    let full = std::env::args().any(|a| a == "full");
    let n_r = if full { 4000 } else { 1000 };
    let grid = dirac2d::edge_energy_grid(1.0, 1e-2, 1e-4, 9)?;
    let cfg = Dirac2DConfig::new(1.0, 2.5, n_r, Kappa::new(7.5)?, grid)?;
    let curve = dirac2d::gap_slope(&cfg)?;
    for (e, n) in curve.energies.iter().zip(&curve.counts) {
        println!("E = {e:.6}: N = {n}");
    }
    println!(
        "slope {:.3} (coarse {:.3}), R(5) = {:.3}, converged: {}",
        curve.fit.slope, curve.coarse_slope, curve.predicted_rate, curve.grid_converged
    );
    Ok(())
}
