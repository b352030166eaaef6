//! Eigenvalues of single Coulomb-Dirac channels on (0, theta).
use gapedge::dirac_channel::{self, DiracChannelSpec, Kappa};

fn main() -> Result<(), gapedge::Error> {
    for (k, nu) in [(0.5, 0.0), (0.5, 0.3), (-1.5, 0.3), (4.5, 0.3)] {
        let spec = DiracChannelSpec::new(Kappa::new(k)?, nu, 1.0)?;
        let ev = dirac_channel::eigenvalues(&spec, (-10.0, 10.0), 20)?;
        println!(
            "kappa = {k}, nu = {nu} ({:?}): {:?}",
            dirac_channel::classify(spec.kappa, nu),
            ev.iter().map(|l| format!("{l:.6}")).collect::<Vec<_>>()
        );
    }
    let spec = DiracChannelSpec::new(Kappa::new(8.5)?, 0.3, 1.0)?;
    println!(
        "min |lambda| at kappa = 17/2: {:.4}",
        dirac_channel::min_modulus(&spec)?
    );
    Ok(())
}
