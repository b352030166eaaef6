//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//! Runtime budgets are part of each criterion.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use gapedge::charge_model::{self, ChargeDistribution, PointCharge};
use gapedge::dipole::{self, DipoleProblem, SandwichParams};
use gapedge::dirac2d::{self, Dirac2DConfig};
use gapedge::dirac_channel::{self, DiracChannelSpec, EndpointClass, Kappa};
use gapedge::mathieu::{self, MathieuProblem};
use gapedge::radial::{self, RadialChannel};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn check(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn mathieu_fidelity() -> Outcome {
    let mut worst = 0.0_f64;
    for p in [0.5, 1.0, 2.0, 5.0] {
        let ours = mathieu::lowest(p, 1).map_err(err)?[0];
        let oracle = common::mathieu_a0(2.0 * p) / 4.0;
        worst = worst.max((ours - oracle).abs());
    }
    check(worst < 1e-8, format!("max |λ₀ - a₀/4| = {worst:.2e}"))?;
    let free = mathieu::spectrum(&MathieuProblem::new(0.0).map_err(err)?).map_err(err)?;
    let mut ks: Vec<f64> = (0..=5)
        .flat_map(|k| [k * k, k * k])
        .skip(1)
        .map(f64::from)
        .collect();
    ks.truncate(free.eigenvalues.len());
    let free_err = free
        .eigenvalues
        .iter()
        .zip(&ks)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check(
        free_err < 1e-12,
        format!("p = 0 deviates from k² by {free_err:.2e}"),
    )?;
    Ok(format!(
        "max oracle gap {worst:.1e}, free spectrum exact to {free_err:.1e}"
    ))
}

fn rate_asymptote() -> Outcome {
    let p = 0.01;
    let r = mathieu::rate(p).map_err(err)?;
    let dev = (r * PI * 2f64.sqrt() / p - 1.0).abs();
    check(
        dev <= 0.02,
        format!("|R(p)π√2/p - 1| = {dev:.4} at p = 0.01"),
    )?;
    for p in [0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0] {
        let r = mathieu::rate(p).map_err(err)?;
        check(r > 0.0, format!("R({p}) = {r} not positive"))?;
    }
    Ok(format!("small-p deviation {dev:.2e}; R > 0 on 9 couplings"))
}

fn radial_law() -> Outcome {
    let ch = RadialChannel::new(-1.0, 1.0).map_err(err)?;
    let ev = radial::lowest_eigenvalues(&ch, 7).map_err(err)?.values;
    let target = (-2.0 * PI).exp();
    // near threshold: n ≥ 3
    let worst_ratio = ev
        .windows(2)
        .skip(2)
        .map(|w| (w[1] / w[0] / target - 1.0).abs())
        .fold(0.0, f64::max);
    check(
        worst_ratio < 0.01,
        format!("ratio deviation {worst_ratio:.2e}"),
    )?;
    let x_lo = (-ev[ev.len() - 1]).sqrt() * 0.5;
    let zeros = common::macdonald_zeros(1.0, x_lo);
    check(
        zeros.len() == ev.len(),
        format!("{} oracle zeros vs {} eigenvalues", zeros.len(), ev.len()),
    )?;
    let worst_oracle = ev
        .iter()
        .zip(&zeros)
        .map(|(l, x)| (l / (-x * x) - 1.0).abs())
        .fold(0.0, f64::max);
    check(
        worst_oracle < 1e-6,
        format!("eigenvalues off the oracle by {worst_oracle:.2e}"),
    )?;
    let grid = radial::log_eps_grid(20.0, 80.0, 61).map_err(err)?;
    let slope = radial::counting_curve(&ch, &grid)
        .map_err(err)?
        .fit()
        .map_err(err)?
        .slope;
    let rel = (slope * 2.0 * PI - 1.0).abs();
    check(
        rel <= 0.02,
        format!("slope {slope:.5} vs 1/(2π): {:.2}%", 100.0 * rel),
    )?;
    Ok(format!(
        "ratio dev {worst_ratio:.1e}, oracle dev {worst_oracle:.1e}, slope off by {:.2}%",
        100.0 * rel
    ))
}

fn main_theorem() -> Outcome {
    let mut parts = Vec::new();
    for d in [0.25, 1.0, 2.5] {
        let r = dipole::verify_rate(&DipoleProblem::new(1.0, d, 1.0).map_err(err)?).map_err(err)?;
        check(
            r.rel_err <= 0.05,
            format!(
                "|d| = {d}: slope {:.4} vs {:.4}, rel_err {:.3}",
                r.fitted_slope, r.predicted_rate, r.rel_err
            ),
        )?;
        parts.push(format!("|d|={d}: {:.2}%", 100.0 * r.rel_err));
    }
    Ok(parts.join(", "))
}

fn sandwich() -> Outcome {
    let prob = DipoleProblem::from_coupling(1.0, 2.0, 1.0).map_err(err)?;
    let c = dipole::sandwich_coefficients(&prob, &SandwichParams::uniform(0.05).map_err(err)?);
    let slope = |p: f64| -> Result<f64, String> {
        let pr = DipoleProblem::from_coupling(1.0, p, 1.0).map_err(err)?;
        Ok(dipole::verify_rate(&pr).map_err(err)?.fitted_slope)
    };
    let (lo, mid, hi) = (slope(c.p_lower)?, slope(2.0)?, slope(c.p_upper)?);
    check(
        lo <= mid && mid <= hi,
        format!("slopes {lo:.4}, {mid:.4}, {hi:.4} not ordered"),
    )?;
    Ok(format!(
        "p in ({:.4}, 2, {:.4}) gives slopes {lo:.4} <= {mid:.4} <= {hi:.4}",
        c.p_lower, c.p_upper
    ))
}

fn dirac_channel_checks() -> Outcome {
    let half = Kappa::new(0.5).map_err(err)?;
    let free = DiracChannelSpec::new(half, 0.0, 1.0).map_err(err)?;
    let ev = dirac_channel::eigenvalues(&free, (-20.0, 20.0), 100).map_err(err)?;
    let oracle = common::bessel_cross_roots(-20.0, 20.0);
    check(
        ev.len() == oracle.len(),
        format!("{} eigenvalues vs {} Bessel roots", ev.len(), oracle.len()),
    )?;
    let bessel = ev
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    check(bessel < 1e-6, format!("Bessel deviation {bessel:.2e}"))?;

    let spec1 = DiracChannelSpec::new(half, 0.3, 1.0).map_err(err)?;
    let spec3 = DiracChannelSpec::new(half, 0.3, 3.0).map_err(err)?;
    let a = dirac_channel::eigenvalues(&spec1, (-15.0, 15.0), 100).map_err(err)?;
    let b = dirac_channel::eigenvalues(&spec3, (-5.0, 5.0), 100).map_err(err)?;
    check(
        a.len() == b.len(),
        "scaling changed the eigenvalue count".into(),
    )?;
    let scaling = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x / 3.0 - y).abs())
        .fold(0.0, f64::max);
    check(scaling < 1e-8, format!("scaling deviation {scaling:.2e}"))?;

    let mut mods = Vec::new();
    for k in [4.5, 6.5, 8.5, 10.5] {
        let spec = DiracChannelSpec::new(Kappa::new(k).map_err(err)?, 0.3, 1.0).map_err(err)?;
        let m = dirac_channel::min_modulus(&spec).map_err(err)?;
        check(m >= k / 2.0, format!("min_modulus {m:.4} < κ/2 at κ = {k}"))?;
        mods.push(format!("{m:.2}"));
    }
    for twice in (-9..=9).step_by(2) {
        let kappa = Kappa::from_twice(twice).map_err(err)?;
        // ν = 0 gives s = 1/2 exactly: r^{-1/2} is not square integrable
        for i in 1..=50 {
            let nu = 0.499 * i as f64 / 50.0;
            let lc = dirac_channel::classify(kappa, nu) == EndpointClass::LimitCircle;
            check(
                lc == (twice.abs() == 1),
                format!("classify wrong at κ = {kappa}, ν = {nu}"),
            )?;
        }
    }
    Ok(format!(
        "Bessel {bessel:.1e}, scaling {scaling:.1e}, min_modulus [{}]",
        mods.join(", ")
    ))
}

fn dirac2d_counting() -> Outcome {
    let k = Kappa::new(7.5).map_err(err)?;
    for n_r in [200, 1000, 4000] {
        let cfg = Dirac2DConfig::new(1.0, 0.0, n_r, k, vec![0.5, 0.9, 0.95]).map_err(err)?;
        let h = dirac2d::assemble(&cfg).map_err(err)?;
        for &e in &cfg.e_grid {
            let n = dirac2d::count_in_gap_of(&h, 1.0, e).map_err(err)?;
            check(
                n == 0,
                format!("free gap polluted: {n} states at E = {e}, n_r = {n_r}"),
            )?;
        }
    }
    let grid = dirac2d::edge_energy_grid(1.0, 1e-2, 1e-4, 17).map_err(err)?;
    let cfg = Dirac2DConfig::new(1.0, 2.5, 4000, k, grid).map_err(err)?;
    let h = dirac2d::assemble(&cfg).map_err(err)?;
    let (neg, pos) = dirac2d::half_gap_counts(&h, 1.0, 0.99).map_err(err)?;
    check(
        neg == pos,
        format!("CP asymmetry at E = 0.99: {neg} vs {pos}"),
    )?;
    let curve = dirac2d::gap_slope(&cfg).map_err(err)?;
    check(
        curve.counts[0] >= 3,
        format!("count {} at E = 0.99", curve.counts[0]),
    )?;
    check(
        curve.counts.windows(2).all(|w| w[0] <= w[1]),
        format!("counts not monotone: {:?}", curve.counts),
    )?;
    let rel = (curve.fit.slope / curve.predicted_rate - 1.0).abs();
    check(
        rel <= 0.25,
        format!(
            "slope {:.4} vs R(5) = {:.4}",
            curve.fit.slope, curve.predicted_rate
        ),
    )?;
    check(
        curve.grid_converged,
        format!(
            "coarse slope {:.4} vs fine {:.4}",
            curve.coarse_slope, curve.fit.slope
        ),
    )?;
    Ok(format!(
        "N(0.99) = {}, N(0.9999) = {}, slope {:.3} vs R(5) = {:.3} ({:.0}%), grid converged",
        curve.counts[0],
        curve.counts[curve.counts.len() - 1],
        curve.fit.slope,
        curve.predicted_rate,
        100.0 * rel
    ))
}

fn charge_model_checks() -> Outcome {
    let (a, nu) = (0.8, 0.35);
    let m = charge_model::moments(&ChargeDistribution::two_point_dipole(a, nu));
    check(
        m.total_charge == 0.0 && m.dipole == [2.0 * a * nu, 0.0],
        format!("two-point moments {m:?}"),
    )?;
    let single = ChargeDistribution::new(
        vec![PointCharge {
            position: [0.0, 0.0],
            coupling: 0.2,
        }],
        vec![],
    );
    let r = charge_model::hypothesis_diagnostics(&single);
    check(
        !r.charge_neutral && !r.theorem_applicable,
        "single charge not flagged".into(),
    )?;
    let pc = |x: f64, y: f64, c: f64| PointCharge {
        position: [x, y],
        coupling: c,
    };
    let quad = ChargeDistribution::new(
        vec![
            pc(1.0, 0.0, 0.2),
            pc(-1.0, 0.0, 0.2),
            pc(0.0, 1.0, -0.2),
            pc(0.0, -1.0, -0.2),
        ],
        vec![],
    );
    let r = charge_model::hypothesis_diagnostics(&quad);
    check(
        !r.dipole_nonzero && !r.theorem_applicable,
        "quadrupole not flagged".into(),
    )?;
    Ok("dipole moments exact; monopole and quadrupole flagged".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("Mathieu fidelity", Duration::from_secs(1), mathieu_fidelity),
        ("rate asymptote", Duration::from_secs(1), rate_asymptote),
        ("radial channel law", Duration::from_secs(10), radial_law),
        (
            "main theorem at desk scale",
            Duration::from_secs(60),
            main_theorem,
        ),
        ("sandwich bracketing", Duration::from_secs(120), sandwich),
        (
            "Dirac channel",
            Duration::from_secs(30),
            dirac_channel_checks,
        ),
        ("2D counting", Duration::from_secs(600), dirac2d_counting),
        ("charge model", Duration::from_secs(1), charge_model_checks),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *budget => Err(format!("{msg}; over budget ({budget:?})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!(
                "criterion {} {name}: PASS ({msg}) [{:.2}s]",
                i + 1,
                took.as_secs_f64()
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {} {name}: FAIL ({msg}) [{:.2}s]",
                    i + 1,
                    took.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
