//! Moments and hypothesis diagnostics for a few charge distributions.
use gapedge::charge_model::{self, ChargeDistribution, PointCharge, RegularCharge};

fn main() {
    let dipole = ChargeDistribution::two_point_dipole(0.5, 0.3);
    let screened = ChargeDistribution::new(
        vec![PointCharge {
            position: [0.0, 0.0],
            coupling: 0.25,
        }],
        vec![RegularCharge {
            center: [0.4, 0.0, 0.0],
            total_charge: -0.25,
            width: 0.3,
        }],
    );
    let single = ChargeDistribution::new(
        vec![PointCharge {
            position: [0.0, 0.0],
            coupling: 0.2,
        }],
        vec![],
    );
    for (name, d) in [
        ("dipole", dipole),
        ("screened", screened),
        ("single", single),
    ] {
        let r = charge_model::hypothesis_diagnostics(&d);
        println!(
            "{name}: Q = {:.3e}, d = ({:.4}, {:.4}), neutral {}, dipole {}, singular core {}, applicable {}",
            r.moments.total_charge,
            r.moments.dipole[0],
            r.moments.dipole[1],
            r.charge_neutral,
            r.dipole_nonzero,
            r.inner_singular,
            r.theorem_applicable
        );
    }
}
