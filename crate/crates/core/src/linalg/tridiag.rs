use crate::error::{Error, Result};

/// Replacement for an exactly vanishing Sturm pivot. The sign is kept so
/// the count stays correct to working precision.
pub const STURM_PIVOT_GUARD: f64 = 1e-300;

/// Absolute bracket width at which bisection stops.
pub const EIGEN_ABS_TOL: f64 = 1e-12;

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid(
                "tridiagonal matrix must have dimension >= 1",
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::invalid(format!(
                "off-diagonal length {} does not match dimension {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(offdiag.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("tridiagonal matrix has non-finite entries"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    fn count_below(&self, shift: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - shift;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let q_safe = if q.abs() < STURM_PIVOT_GUARD {
                if q < 0.0 {
                    -STURM_PIVOT_GUARD
                } else {
                    STURM_PIVOT_GUARD
                }
            } else {
                q
            };
            let e = self.offdiag[i - 1];
            q = (self.diag[i] - shift) - e * e / q_safe;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Number of eigenvalues of `t` strictly below `shift` (Sturm sequence of
/// `LDLᵀ` pivots).
pub fn sturm_count(t: &SymTridiag, shift: f64) -> Result<usize> {
    if !shift.is_finite() {
        return Err(Error::invalid(format!("non-finite shift {shift}")));
    }
    Ok(t.count_below(shift))
}

/// The `k` smallest eigenvalues of `t` in ascending order, each located by
/// Sturm bisection to [`EIGEN_ABS_TOL`].
pub fn eigen_tridiag(t: &SymTridiag, k: usize) -> Result<Vec<f64>> {
    if k > t.dim() {
        return Err(Error::invalid(format!(
            "requested {k} eigenvalues of a {}x{} matrix",
            t.dim(),
            t.dim()
        )));
    }
    let (glo, ghi) = t.gershgorin();
    let pad = 1e-9 * (glo.abs().max(ghi.abs()).max(1.0));
    let (glo, ghi) = (glo - pad, ghi + pad);

    let mut out = Vec::with_capacity(k);
    let mut lo = glo;
    for j in 0..k {
        // lambda_j is the smallest x with count_below(x) > j
        let mut a = lo;
        let mut b = ghi;
        while b - a > EIGEN_ABS_TOL {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if t.count_below(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let lambda = 0.5 * (a + b);
        out.push(lambda);
        // the next eigenvalue cannot lie below the current bracket
        lo = a;
    }
    Ok(out)
}
