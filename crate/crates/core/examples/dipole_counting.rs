//! Counting curve of the separated dipole comparison operator and its slope
//! against the Mathieu trace.
use gapedge::dipole::{self, DipoleProblem};

fn main() -> Result<(), gapedge::Error> {
    for d in [0.25, 1.0, 2.5] {
        let r = dipole::verify_rate(&DipoleProblem::new(1.0, d, 1.0)?)?;
        println!(
            "|d| = {d}: slope {:.4} +- {:.4}, R(2m|d|) = {:.4}, rel_err {:.2}%",
            r.fitted_slope,
            r.stderr,
            r.predicted_rate,
            100.0 * r.rel_err
        );
    }
    let prob = DipoleProblem::new(1.0, 1.0, 1.0)?;
    let curve = dipole::counting_curve(&prob, &[1e-10, 1e-20, 1e-40])?;
    for (e, n) in curve.eps.iter().zip(&curve.counts) {
        println!("N({e:e}) = {n}");
    }
    Ok(())
}
