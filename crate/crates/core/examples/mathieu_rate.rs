//! Lowest Mathieu eigenvalues and the rate R(p) over a few couplings.
use gapedge::mathieu;

fn main() -> Result<(), gapedge::Error> {
    println!("{:>6}  {:>14}  {:>10}  negative", "p", "lambda_0", "R(p)");
    for p in [0.01, 0.5, 2.0, 5.0, 20.0] {
        let spec = mathieu::spectrum(&mathieu::MathieuProblem::new(p)?)?;
        println!(
            "{p:>6}  {:>14.10}  {:>10.6}  {}",
            spec.eigenvalues[0],
            spec.rate,
            spec.negative().count()
        );
    }
    Ok(())
}
