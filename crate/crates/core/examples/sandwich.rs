//! Comparison couplings p_lower < p < p_upper and the slopes they produce.
use gapedge::dipole::{self, DipoleProblem, SandwichParams};

fn main() -> Result<(), gapedge::Error> {
    let prob = DipoleProblem::from_coupling(1.0, 2.0, 1.0)?;
    for t in [0.1, 0.05, 0.01] {
        let c = dipole::sandwich_coefficients(&prob, &SandwichParams::uniform(t)?);
        let slope = |p: f64| -> Result<f64, gapedge::Error> {
            Ok(dipole::verify_rate(&DipoleProblem::from_coupling(1.0, p, 1.0)?)?.fitted_slope)
        };
        println!(
            "zeta = eta = xi = {t}: p in [{:.4}, {:.4}], slopes {:.4} / {:.4} / {:.4}",
            c.p_lower,
            c.p_upper,
            slope(c.p_lower)?,
            slope(prob.p)?,
            slope(c.p_upper)?
        );
    }
    Ok(())
}
