use crate::error::{Error, Result};

pub const MIN_REL_TOL: f64 = 1e-13;
pub const MAX_REL_TOL: f64 = 1e-3;

const MAX_STEPS: usize = 2_000_000;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
// PI controller exponents for an order-5 error estimate
const BETA1: f64 = 0.7 / 5.0;
const BETA2: f64 = 0.4 / 5.0;

/// Right-hand side `dy/dt = f(t, y)` written into `dy`.
pub trait OdeSystem {
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

impl<F> OdeSystem for F
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
        self(t, y, dy)
    }
}

// Dormand–Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` with an embedded
/// Dormand–Prince 4(5) pair and PI step-size control. The local error of
/// each component is held below `rel_tol * max(1, |y|)`.
///
/// Step acceptance depends only on the inputs, so repeated calls are
/// bit-identical.
pub fn integrate_ode<S: OdeSystem + ?Sized>(
    rhs: &S,
    t0: f64,
    t1: f64,
    y0: &[f64],
    rel_tol: f64,
) -> Result<Vec<f64>> {
    if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&rel_tol) {
        return Err(Error::invalid(format!(
            "rel_tol {rel_tol} outside [{MIN_REL_TOL}, {MAX_REL_TOL}]"
        )));
    }
    if !t0.is_finite() || !t1.is_finite() || y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite initial data"));
    }
    let n = y0.len();
    let mut y = y0.to_vec();
    if t0 == t1 || n == 0 {
        return Ok(y);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    let mut t = t0;
    rhs.rhs(t, &y, &mut k1);

    // initial step from the derivative scale
    let d0 = y.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let d1 = k1.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut h = if d1 > 0.0 {
        (0.01 * d0 / d1).min(span)
    } else {
        span
    };
    h = h.max(span * 1e-12);
    let mut err_prev = 1e-4_f64;

    for _ in 0..MAX_STEPS {
        let remaining = (t1 - t).abs();
        if remaining <= 1e-15 * span.max(t1.abs()) {
            return Ok(y);
        }
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        let hs = dir * step;

        for i in 0..n {
            tmp[i] = y[i] + hs * A21 * k1[i];
        }
        rhs.rhs(t + C2 * hs, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs.rhs(t + C3 * hs, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs.rhs(t + C4 * hs, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs.rhs(t + C5 * hs, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] =
                y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs.rhs(t + hs, &tmp, &mut k6);
        for i in 0..n {
            y_new[i] = y[i] + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let t_new = if last { t1 } else { t + hs };
        rhs.rhs(t_new, &y_new, &mut k7);

        let mut err = 0.0_f64;
        for i in 0..n {
            let e =
                hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = rel_tol * y[i].abs().max(y_new[i].abs()).max(1.0);
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            h = step * MIN_FACTOR;
        } else if err <= 1.0 {
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            if last {
                return Ok(y);
            }
            let e = err.max(1e-10);
            let fac = SAFETY * e.powf(-BETA1) * err_prev.powf(BETA2);
            h = step * fac.clamp(MIN_FACTOR, MAX_FACTOR);
            err_prev = e;
        } else {
            let fac = SAFETY * err.powf(-0.2);
            h = step * fac.clamp(MIN_FACTOR, 1.0);
        }
        if h < 1e-14 * t.abs().max(span) {
            return Err(Error::Stiffness { t });
        }
    }
    Err(Error::Stiffness { t })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let y = integrate_ode(
            &|_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0],
            0.0,
            1.0,
            &[1.0],
            1e-10,
        )
        .unwrap();
        assert!((y[0] - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let y = integrate_ode(
            &|_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0],
            1.0,
            0.0,
            &[1.0],
            1e-10,
        )
        .unwrap();
        assert!((y[0] - (-1.0_f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let osc = |_t: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = -y[0];
        };
        let tau = 2.0 * std::f64::consts::PI;
        let y = integrate_ode(&osc, 0.0, 10.0 * tau, &[1.0, 0.0], 1e-10).unwrap();
        let energy = 0.5 * (y[0] * y[0] + y[1] * y[1]);
        assert!((energy - 0.5).abs() < 1e-6);
    }

    #[test]
    fn tolerance_range_is_enforced() {
        let f = |_t: f64, _y: &[f64], dy: &mut [f64]| dy[0] = 0.0;
        assert!(integrate_ode(&f, 0.0, 1.0, &[0.0], 1e-14).is_err());
        assert!(integrate_ode(&f, 0.0, 1.0, &[0.0], 1e-2).is_err());
    }

    #[test]
    fn finite_time_blowup_is_reported() {
        // y' = y^2 blows up at t = 1
        let f = |_t: f64, y: &[f64], dy: &mut [f64]| dy[0] = y[0] * y[0];
        match integrate_ode(&f, 0.0, 2.0, &[1.0], 1e-8) {
            Err(Error::Stiffness { t }) => assert!((t - 1.0).abs() < 1e-6, "t = {t}"),
            other => panic!("expected stiffness error, got {other:?}"),
        }
    }
}
