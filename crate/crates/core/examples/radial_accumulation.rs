//! Geometric accumulation of eigenvalues in one attractive inverse-square channel.
use gapedge::radial::{self, RadialChannel};

fn main() -> Result<(), gapedge::Error> {
    let ch = RadialChannel::new(-1.0, 1.0)?;
    let ev = radial::lowest_eigenvalues(&ch, 6)?;
    for (n, w) in ev.values.windows(2).enumerate() {
        println!(
            "n = {}: lambda = {:.6e}, ratio to next = {:.6e}",
            n + 1,
            w[0],
            w[1] / w[0]
        );
    }
    println!("e^(-2 pi) = {:.6e}", (-2.0 * std::f64::consts::PI).exp());

    let grid = radial::log_eps_grid(20.0, 80.0, 61)?;
    let fit = radial::counting_curve(&ch, &grid)?.fit()?;
    println!(
        "slope {:.5} +- {:.5}, expected {:.5}",
        fit.slope,
        fit.slope_stderr,
        radial::channel_slope(-1.0)
    );
    Ok(())
}
